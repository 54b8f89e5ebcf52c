//! Exhaustive experiments over grid profiles.
//!
//! Profiles on `G_l` are grouped into classes under agent permutations, grid
//! rotations and reflection. Anonymous and neutral mechanisms take the same
//! approximation ratio on a whole class, so one representative per class is
//! evaluated. Classes are scored in parallel on a dedicated pool and reduced
//! with a total order (largest ratio, then smallest witness), which makes the
//! result independent of the worker count.

mod grid;
mod verify;

use std::cmp::Ordering;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

pub use grid::{
    arrangements, binomial, canonicalize, covered_profiles, enumerate_classes, enumeration_size,
    sorted_tuples, GridClass, GridSpec,
};
pub use verify::{
    normalized_grid_profiles, segment_grid_profiles, verify_bounds, verify_closed_forms,
    verify_reduction, BoundReport, BoundViolation, CheckReport, Violation,
};

use crate::cycle::{expected_cost, CyclePoint, MetricKind, Profile};
use crate::frac::{self, Rational};
use crate::mechanism::{approximation_ratio, Mechanism};
use crate::{Error, Result};

/// Enumeration size above which an unrestricted search is refused.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Clone)]
pub struct SearchConfig {
    pub n: usize,
    pub grid: GridSpec,
    /// Only profiles with at most this many distinct reports.
    pub max_distinct: Option<usize>,
    pub mechanism: Arc<dyn Mechanism>,
    pub workers: usize,
    pub budget: u128,
}

impl SearchConfig {
    pub fn new(n: usize, l: usize, mechanism: Arc<dyn Mechanism>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        Ok(SearchConfig {
            n,
            grid: GridSpec::new(l)?,
            max_distinct: None,
            mechanism,
            workers: 1,
            budget: DEFAULT_BUDGET,
        })
    }

    pub fn max_distinct(mut self, m: Option<usize>) -> Result<Self> {
        if m == Some(0) {
            return Err(Error::Config("max_distinct must be at least 1".into()));
        }
        self.max_distinct = m;
        Ok(self)
    }

    pub fn workers(mut self, w: usize) -> Result<Self> {
        if w == 0 {
            return Err(Error::Config("worker count must be positive".into()));
        }
        self.workers = w;
        Ok(self)
    }

    pub fn budget(mut self, b: u128) -> Self {
        self.budget = b;
        self
    }

    fn check_budget(&self) -> Result<()> {
        let estimate = enumeration_size(self.n, self.grid.l);
        if self.max_distinct.is_none() && estimate > self.budget {
            return Err(Error::BudgetExceeded {
                estimate,
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// Canonical classes in enumeration order, after the budget check.
    pub fn classes(&self) -> Result<Vec<GridClass>> {
        self.check_budget()?;
        Ok(enumerate_classes(self.n, &self.grid, self.max_distinct))
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
    }
}

/// One representative profile per canonical class.
pub fn enumerate_profiles(c: &SearchConfig) -> Result<impl Iterator<Item = Profile> + '_> {
    let classes = c.classes()?;
    Ok(classes.into_iter().map(move |cls| c.grid.profile_of(&cls.positions)))
}

/// Worst case found by [`worst_case`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApxRecord {
    pub n: usize,
    pub l: usize,
    pub mechanism: String,
    #[serde(with = "frac::serde_str")]
    pub max_ratio: Rational,
    pub witness: Profile,
    /// Raw profiles covered by the examined classes.
    pub profiles_examined: u128,
    pub canonical_classes: usize,
    pub max_distinct: Option<usize>,
}

struct Best {
    ratio: Rational,
    witness: Profile,
}

impl Best {
    fn better(a: Best, b: Best) -> Best {
        match a.ratio.cmp(&b.ratio) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal if a.witness <= b.witness => a,
            Ordering::Equal => b,
        }
    }
}

pub fn worst_case(c: &SearchConfig) -> Result<ApxRecord> {
    let classes = c.classes()?;
    let best = c.pool()?.install(|| {
        classes
            .par_iter()
            .map(|cls| {
                let b = c.grid.profile_of(&cls.positions);
                let r = approximation_ratio(c.mechanism.as_ref(), &b)?;
                Ok(Best {
                    ratio: r.ratio,
                    witness: b,
                })
            })
            .try_reduce_with(|a, b| Ok(Best::better(a, b)))
    });
    let best = best.ok_or_else(|| Error::Config("no profiles to examine".into()))??;
    Ok(ApxRecord {
        n: c.n,
        l: c.grid.l,
        mechanism: c.mechanism.name(),
        max_ratio: best.ratio,
        witness: best.witness,
        profiles_examined: covered_profiles(&classes),
        canonical_classes: classes.len(),
        max_distinct: c.max_distinct,
    })
}

/// A unilateral deviation that strictly lowers the deviator's expected cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpViolation {
    pub profile: Profile,
    /// Position of the deviating agent in `profile`.
    pub agent: usize,
    pub deviation: CyclePoint,
    #[serde(with = "frac::serde_str")]
    pub truthful_cost: Rational,
    #[serde(with = "frac::serde_str")]
    pub deviated_cost: Rational,
}

/// Every grid deviation of every agent in every class representative that
/// strictly benefits the deviator under the cycle metric.
pub fn verify_sp(c: &SearchConfig) -> Result<Vec<SpViolation>> {
    let classes = c.classes()?;
    let points = c.grid.points();
    let m = c.mechanism.as_ref();
    let found = c.pool()?.install(|| {
        classes
            .par_iter()
            .map(|cls| {
                let b = c.grid.profile_of(&cls.positions);
                let truthful = m.apply(&b)?;
                let mut out = Vec::new();
                for (agent, own) in b.reports().iter().enumerate() {
                    let truthful_cost = expected_cost(own, &truthful, MetricKind::Cycle);
                    for v in points.iter().filter(|v| *v != own) {
                        let deviated = m.apply(&b.with_report(agent, v.clone()))?;
                        let deviated_cost = expected_cost(own, &deviated, MetricKind::Cycle);
                        if deviated_cost < truthful_cost {
                            out.push(SpViolation {
                                profile: b.clone(),
                                agent,
                                deviation: v.clone(),
                                truthful_cost: truthful_cost.clone(),
                                deviated_cost,
                            });
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(found.into_iter().flatten().collect())
}
