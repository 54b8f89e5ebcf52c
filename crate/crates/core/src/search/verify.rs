//! Exhaustive invariant checks behind `cyclefl verify`.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{grid::sorted_tuples, GridSpec, SearchConfig};
use crate::cut::{
    is_dominated, is_normalized, nonboundary_count, normalize, phi, phi_normalized,
    reduction_trace, sc_cut_pcd, sc_cut_rd, NormalizedProfile, SegmentProfile,
};
use crate::cycle::{point_cost, social_cost, CyclePoint, MetricKind, Profile};
use crate::frac::{self, int, Rational};
use crate::mechanism::{approximation_ratio, pcd, random_dictator, MechanismId};
use crate::lottery::Lottery;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub profile: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub examined: usize,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub profile: Profile,
    pub normalized: Profile,
    #[serde(with = "frac::serde_str")]
    pub ratio: Rational,
    pub phi: Option<String>,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub l: usize,
    pub classes_checked: usize,
    pub unanimous_skipped: usize,
    #[serde(with = "frac::serde_str")]
    pub max_ratio: Rational,
    #[serde(with = "frac::serde_str")]
    pub max_phi: Rational,
    pub violations: Vec<BoundViolation>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn seven_quarters() -> Rational {
    frac::ratio(7, 4)
}

/// Every normalized profile whose reports lie on `G_l`.
pub fn normalized_grid_profiles(n: usize, l: usize) -> Result<Vec<NormalizedProfile>> {
    let g = GridSpec::new(l)?;
    if n % 2 == 0 {
        return Err(Error::Config(format!("normalized profiles need odd n, got {n}")));
    }
    Ok(sorted_tuples(n, l)
        .into_par_iter()
        .filter_map(|t| {
            let b = g.profile_of(&t);
            is_normalized(&b).then(|| NormalizedProfile::try_from(b).expect("checked"))
        })
        .collect())
}

/// Every segment profile with values in `{j / l : |j / l| <= 1/2}`.
pub fn segment_grid_profiles(n: usize, l: usize) -> Result<Vec<SegmentProfile>> {
    GridSpec::new(l)?;
    if n % 2 == 0 || n < 3 {
        return Err(Error::Config(format!("segment profiles need odd n >= 3, got {n}")));
    }
    let k = n / 2;
    let z = l / 2;
    // Non-decreasing k-tuples over 0..=z.
    let halves = sorted_tuples(k, z + 1);
    let mut out = Vec::with_capacity(halves.len() * halves.len());
    for neg in &halves {
        for pos in &halves {
            let mut v: Vec<Rational> = neg
                .iter()
                .rev()
                .map(|&j| frac::ratio(-(j as i64), l as i64))
                .collect();
            v.push(Rational::zero());
            v.extend(pos.iter().map(|&j| frac::ratio(j as i64, l as i64)));
            if let Ok(s) = SegmentProfile::new(v) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Ratio of RD+PCD against `phi` of the normalized form, and `phi <= 7/4`,
/// on every class representative. The configured mechanism is ignored: the
/// bound is specific to RD+PCD.
pub fn verify_bounds(c: &SearchConfig) -> Result<BoundReport> {
    let classes = c.classes()?;
    let mixed = MechanismId::rd_pcd().build();
    let cap = seven_quarters();
    let rows = c.pool()?.install(|| {
        classes
            .par_iter()
            .map(|cls| {
                let b = c.grid.profile_of(&cls.positions);
                let ratio = approximation_ratio(mixed.as_ref(), &b)?.ratio;
                let norm = normalize(&b)?;
                let mut bad = Vec::new();
                let violation = |kind: &str, phi: Option<&Rational>| BoundViolation {
                    profile: b.clone(),
                    normalized: norm.profile().clone(),
                    ratio: ratio.clone(),
                    phi: phi.map(frac::format),
                    kind: kind.to_string(),
                };
                let norm_ratio = approximation_ratio(mixed.as_ref(), norm.profile())?.ratio;
                if norm_ratio != ratio {
                    bad.push(violation("normalization changed the ratio", None));
                }
                let phi = match phi_normalized(&norm) {
                    Ok(p) => Some(p),
                    Err(Error::PhiUndefined) => None,
                    Err(e) => return Err(e),
                };
                if let Some(p) = &phi {
                    if ratio > *p {
                        bad.push(violation("ratio exceeds phi", Some(p)));
                    }
                    if *p > cap {
                        bad.push(violation("phi exceeds 7/4", Some(p)));
                    }
                }
                Ok((ratio, phi, bad))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut report = BoundReport {
        n: c.n,
        l: c.grid.l,
        classes_checked: rows.len(),
        unanimous_skipped: 0,
        max_ratio: int(1),
        max_phi: Rational::zero(),
        violations: Vec::new(),
    };
    for (ratio, phi, bad) in rows {
        report.max_ratio = report.max_ratio.max(ratio);
        match phi {
            Some(p) => report.max_phi = report.max_phi.max(p),
            None => report.unanimous_skipped += 1,
        }
        report.violations.extend(bad);
    }
    Ok(report)
}

fn lotteries(b: &Profile) -> Result<[(&'static str, Lottery); 3]> {
    let rd = random_dictator(b);
    let pc = pcd(b)?;
    let mixed = rd.mix(&pc);
    Ok([("rd", rd), ("pcd", pc), ("rd+pcd", mixed)])
}

/// Closed-form cut costs against direct evaluation, the cut inequality, the
/// preserved cost of point 0, and the incremental-difference identity, on
/// all normalized grid profiles.
pub fn verify_closed_forms(n: usize, l: usize) -> Result<CheckReport> {
    let profiles = normalized_grid_profiles(n, l)?;
    let zero = CyclePoint::zero();
    let per_profile = profiles
        .par_iter()
        .map(|nb| {
            let b = nb.profile();
            let shown = b.to_string();
            let mut bad = Vec::new();
            let mut flag = |detail: String| {
                bad.push(Violation {
                    profile: shown.clone(),
                    detail,
                })
            };
            let [rd, pc, mixed] = lotteries(b)?;
            let direct_rd = social_cost(b, &rd.1, MetricKind::Cut);
            let direct_pcd = social_cost(b, &pc.1, MetricKind::Cut);
            if sc_cut_rd(nb) != direct_rd {
                flag(format!(
                    "RD closed form {} != direct {}",
                    frac::format(&sc_cut_rd(nb)),
                    frac::format(&direct_rd)
                ));
            }
            if sc_cut_pcd(nb) != direct_pcd {
                flag(format!(
                    "PCD closed form {} != direct {}",
                    frac::format(&sc_cut_pcd(nb)),
                    frac::format(&direct_pcd)
                ));
            }
            for (name, l) in [&rd, &pc, &mixed] {
                let cut = social_cost(b, l, MetricKind::Cut);
                let cyc = social_cost(b, l, MetricKind::Cycle);
                if cut < cyc {
                    flag(format!("cut cost below cycle cost for {name}"));
                }
            }
            if point_cost(b, &zero, MetricKind::Cut) != point_cost(b, &zero, MetricKind::Cycle) {
                flag("cut changed the cost of point 0".into());
            }
            let k = nb.k() as isize;
            let cut_at = |i: isize| point_cost(b, b.agent(i), MetricKind::Cut);
            let abs_at = |i: isize| b.agent(i).coord().abs();
            for i in 1..=k {
                let lhs = cut_at(i) - cut_at(i - 1);
                let rhs = int(2 * i as i64 - 1) * (abs_at(i) - abs_at(i - 1));
                if lhs != rhs {
                    flag(format!("incremental difference fails at agent {i}"));
                }
                let lhs = cut_at(-i) - cut_at(-i + 1);
                let rhs = int(2 * i as i64 - 1) * (abs_at(-i) - abs_at(-i + 1));
                if lhs != rhs {
                    flag(format!("mirrored incremental difference fails at agent {}", -i));
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport {
        check: "closed-forms".into(),
        examined: profiles.len(),
        violations: per_profile.into_iter().flatten().collect(),
    })
}

/// Reduction soundness and the dominated / 7/4 caps on all segment grid
/// profiles.
pub fn verify_reduction(n: usize, l: usize) -> Result<CheckReport> {
    let profiles = segment_grid_profiles(n, l)?;
    let cap = seven_quarters();
    let dominated_cap = frac::ratio(3, 2) - frac::ratio(1, n as i64);
    let per_profile: Vec<Vec<Violation>> = profiles
        .par_iter()
        .map(|b| {
            let mut bad = Vec::new();
            let mut flag = |detail: String| {
                bad.push(Violation {
                    profile: b.to_string(),
                    detail,
                })
            };
            let start = phi(b);
            if start > cap {
                flag(format!("phi {} exceeds 7/4", frac::format(&start)));
            }
            if is_dominated(b) && start > dominated_cap {
                flag(format!(
                    "dominated profile has phi {} above 3/2 - 1/n",
                    frac::format(&start)
                ));
            }
            for step in reduction_trace(b).windows(2) {
                if nonboundary_count(&step[1]) >= nonboundary_count(&step[0]) {
                    flag(format!("step {} -> {} did not reduce w", step[0], step[1]));
                }
                if phi(&step[1]) < phi(&step[0]) {
                    flag(format!("step {} -> {} decreased phi", step[0], step[1]));
                }
            }
            bad
        })
        .collect();
    Ok(CheckReport {
        check: "reduction".into(),
        examined: profiles.len(),
        violations: per_profile.into_iter().flatten().collect(),
    })
}
