//! Cut-based upper bound on the approximation ratio of RD+PCD.
//!
//! A profile is normalized when 0 is an optimal point, the reports are
//! sorted clockwise from `-1/2`, and agent 0 reports 0. For such a profile
//! the cycle can be cut just before `-1/2`; costs measured along the
//! resulting segment never decrease while the cost of point 0 is unchanged,
//! so
//!
//! ```text
//! phi(b) = (sc'(RD(b)) + sc'(PCD(b))) / (2 sc'(0))
//! ```
//!
//! bounds the ratio from above. `phi` extends to every non-decreasing
//! segment profile with `b_0 = 0` ([`SegmentProfile`]), and is maximized over
//! the boundary profiles taking values in `{-1/2, 0, 1/2}` only.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cycle::{optimal_points, point_cost, CyclePoint, MetricKind, Profile};
use crate::frac::{self, half, int, Rational};
use crate::{Error, Result};

/// A profile satisfying the three normalization conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalizedProfile(Profile);

impl NormalizedProfile {
    pub fn profile(&self) -> &Profile {
        &self.0
    }

    pub fn into_inner(self) -> Profile {
        self.0
    }

    pub fn k(&self) -> usize {
        self.0.k()
    }

    fn coords(&self) -> Vec<Rational> {
        self.0.reports().iter().map(|p| p.coord().clone()).collect()
    }

    pub fn to_segment(&self) -> Result<SegmentProfile> {
        SegmentProfile::new(self.coords())
    }
}

impl TryFrom<Profile> for NormalizedProfile {
    type Error = Error;

    fn try_from(b: Profile) -> Result<Self> {
        if is_normalized(&b) {
            Ok(NormalizedProfile(b))
        } else {
            Err(Error::NotNormalized)
        }
    }
}

pub fn is_normalized(b: &Profile) -> bool {
    if !b.is_odd() {
        return false;
    }
    let zero = CyclePoint::zero();
    if b.agent(0) != &zero || !b.reports().windows(2).all(|w| w[0] <= w[1]) {
        return false;
    }
    let (opt, _) = optimal_points(b);
    point_cost(b, &zero, MetricKind::Cycle) == opt
}

/// Rotates an optimal point to 0 and relabels agents clockwise from `-1/2`.
/// With several optimal points the lexicographically smallest result wins.
pub fn normalize(b: &Profile) -> Result<NormalizedProfile> {
    if !b.is_odd() {
        return Err(Error::InputDomain(format!(
            "normalization needs an odd number of agents, got {}",
            b.n()
        )));
    }
    let (_, optima) = optimal_points(b);
    let best = optima
        .iter()
        .map(|v| b.rotate(&-v.coord().clone()).sorted())
        .min()
        .expect("at least one optimal point");
    debug_assert!(is_normalized(&best), "{best}");
    Ok(NormalizedProfile(best))
}

/// A non-decreasing map from agents `-k..=k` into the closed segment
/// `[-1/2, 1/2]` with `b_0 = 0`, other than the constant 0. Unlike cycle
/// points, `-1/2` and `1/2` are distinct here.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegmentProfile(Vec<Rational>);

impl SegmentProfile {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        let n = values.len();
        if n % 2 == 0 {
            return Err(Error::NotSegment(format!("{n} agents is not an odd count")));
        }
        let h = half();
        if values.iter().any(|v| v.abs() > h) {
            return Err(Error::NotSegment("value outside [-1/2, 1/2]".into()));
        }
        if !values.windows(2).all(|w| w[0] <= w[1]) {
            return Err(Error::NotSegment("values are not non-decreasing".into()));
        }
        if !values[n / 2].is_zero() {
            return Err(Error::NotSegment("agent 0 does not report 0".into()));
        }
        if values.iter().all(Zero::is_zero) {
            return Err(Error::NotSegment("the constant 0 profile is excluded".into()));
        }
        Ok(SegmentProfile(values))
    }

    pub fn parse_list(s: &str) -> Result<Self> {
        let v = s
            .split(',')
            .map(frac::parse)
            .collect::<Result<Vec<_>>>()?;
        SegmentProfile::new(v)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn k(&self) -> usize {
        self.0.len() / 2
    }

    /// Value of agent `i` in `-k..=k`.
    pub fn at(&self, i: isize) -> &Rational {
        &self.0[(i + self.k() as isize) as usize]
    }

    /// `b[x]`: every agent reporting `v` reports `x` instead.
    pub fn replace(&self, v: &Rational, x: &Rational) -> Result<SegmentProfile> {
        SegmentProfile::new(
            self.0
                .iter()
                .map(|y| if y == v { x.clone() } else { y.clone() })
                .collect(),
        )
    }

    /// Sorted distinct values.
    pub fn image(&self) -> Vec<Rational> {
        let mut v = self.0.clone();
        v.dedup();
        v
    }
}

impl fmt::Display for SegmentProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(frac::format).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for SegmentProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SegmentProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.0.iter().map(frac::format).collect();
        parts.serialize(s)
    }
}

// The closed forms below take `abs[i + k] = |b_i|` for a non-decreasing
// profile with b_0 = 0.

fn rd_cut_sum(abs: &[Rational]) -> Rational {
    let k = (abs.len() / 2) as i64;
    let n = 2 * k + 1;
    (-k..=k).fold(Rational::zero(), |acc, i| {
        acc + frac::ratio(4 * i.abs(), n) * &abs[(i + k) as usize]
    })
}

fn pcd_cut_sum(abs: &[Rational]) -> Rational {
    let k = (abs.len() / 2) as i64;
    let a = |i: i64| &abs[(i + k) as usize];
    let mut total: Rational = abs.iter().sum();
    for j in 1..=k {
        total += a(j) * int(2 * k + 1 - 2 * j) * (a(j - k - 1) - a(j - k));
    }
    for j in -k..0 {
        total += a(j) * int(2 * k + 1 + 2 * j) * (a(j + k + 1) - a(j + k));
    }
    total
}

fn abs_values(values: &[Rational]) -> Vec<Rational> {
    values.iter().map(Signed::abs).collect()
}

/// `sc'(RD(b)) = sum_i 4|i| |b_i| / (2k+1)`.
pub fn sc_cut_rd(b: &NormalizedProfile) -> Rational {
    rd_cut_sum(&abs_values(&b.coords()))
}

/// Closed form of `sc'(PCD(b))`: `sum_j |b_j|` plus the two side sums with
/// coefficients `(2k+1 - 2j)` for `j > 0` and `(2k+1 + 2j)` for `j < 0`.
pub fn sc_cut_pcd(b: &NormalizedProfile) -> Rational {
    pcd_cut_sum(&abs_values(&b.coords()))
}

/// Numerator and denominator of `phi`, before division.
pub fn phi_parts(b: &SegmentProfile) -> (Rational, Rational) {
    let abs = abs_values(b.values());
    let num = rd_cut_sum(&abs) + pcd_cut_sum(&abs);
    let den = int(2) * abs.iter().sum::<Rational>();
    (num, den)
}

pub fn phi(b: &SegmentProfile) -> Rational {
    let (num, den) = phi_parts(b);
    num / den
}

/// `phi` of a normalized profile; undefined on the all-zero profile.
pub fn phi_normalized(b: &NormalizedProfile) -> Result<Rational> {
    match b.to_segment() {
        Ok(s) => Ok(phi(&s)),
        Err(_) => Err(Error::PhiUndefined),
    }
}

/// Distinct values outside `{-1/2, 0, 1/2}`.
pub fn nonboundary_count(b: &SegmentProfile) -> usize {
    let h = half();
    b.image()
        .iter()
        .filter(|v| !v.is_zero() && v.abs() != h)
        .count()
}

/// At least `k + 1` agents report 0.
pub fn is_dominated(b: &SegmentProfile) -> bool {
    b.values().iter().filter(|v| v.is_zero()).count() > b.k()
}

/// `(0, ..., 0, 1/2)`: the dominated profile attaining `3/2 - 1/n`.
pub fn dominated_extreme(k: usize) -> SegmentProfile {
    let mut v = vec![Rational::zero(); 2 * k + 1];
    v[2 * k] = half();
    SegmentProfile(v)
}

/// Image neighbours of `v`: the largest value below it (or `-1/2`) and the
/// smallest value above it (or `1/2`).
pub fn neighbours(b: &SegmentProfile, v: &Rational) -> (Rational, Rational) {
    let img = b.image();
    let below = img.iter().rev().find(|y| *y < v).cloned().unwrap_or_else(|| -half());
    let above = img.iter().find(|y| *y > v).cloned().unwrap_or_else(half);
    (below, above)
}

/// One reduction step, or `None` once the profile is boundary. Dominated
/// profiles jump straight to [`dominated_extreme`]; otherwise the smallest
/// non-boundary value is moved onto whichever neighbour gives the larger
/// `phi` (the upper neighbour on ties).
pub fn reduction_step(b: &SegmentProfile) -> Option<SegmentProfile> {
    if nonboundary_count(b) == 0 {
        return None;
    }
    if is_dominated(b) {
        return Some(dominated_extreme(b.k()));
    }
    let h = half();
    let v = b
        .image()
        .into_iter()
        .find(|v| !v.is_zero() && v.abs() != h)
        .expect("nonboundary_count > 0");
    let (below, above) = neighbours(b, &v);
    // Non-dominated profiles take at least three values, so neither
    // replacement can produce the constant 0 profile.
    let down = b.replace(&v, &below).expect("order preserved");
    let up = b.replace(&v, &above).expect("order preserved");
    if phi(&up) >= phi(&down) {
        Some(up)
    } else {
        Some(down)
    }
}

/// Every profile visited on the way to a boundary profile, starting with `b`.
pub fn reduction_trace(b: &SegmentProfile) -> Vec<SegmentProfile> {
    let mut trace = vec![b.clone()];
    while let Some(next) = reduction_step(trace.last().expect("non-empty")) {
        trace.push(next);
    }
    trace
}

pub fn reduce_to_boundary(b: &SegmentProfile) -> SegmentProfile {
    reduction_trace(b).pop().expect("non-empty")
}

/// The boundary profile with `-1/2`, `0`, `1/2` repeated `k - m_minus`,
/// `1 + m_minus + m_plus` and `k - m_plus` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BoundaryParams {
    pub k: u64,
    pub m_minus: u64,
    pub m_plus: u64,
}

impl BoundaryParams {
    pub fn new(k: u64, m_minus: u64, m_plus: u64) -> Result<Self> {
        if k == 0 || m_minus > k || m_plus > k {
            return Err(Error::InputDomain(format!(
                "boundary parameters need k >= 1 and m_minus, m_plus <= k (got {k}, {m_minus}, {m_plus})"
            )));
        }
        Ok(BoundaryParams { k, m_minus, m_plus })
    }

    /// At least `k + 1` zeros.
    pub fn is_dominated(&self) -> bool {
        self.m_minus + self.m_plus + 1 > self.k
    }

    pub fn expand(&self) -> Result<SegmentProfile> {
        let (k, mm, mp) = (self.k as usize, self.m_minus as usize, self.m_plus as usize);
        let mut v = Vec::with_capacity(2 * k + 1);
        v.extend(std::iter::repeat_n(-half(), k - mm));
        v.extend(std::iter::repeat_n(Rational::zero(), 1 + mm + mp));
        v.extend(std::iter::repeat_n(half(), k - mp));
        SegmentProfile::new(v)
    }

    fn closed_form(&self) -> Option<(i128, i128)> {
        let (k, mm, mp) = (self.k as i128, self.m_minus as i128, self.m_plus as i128);
        let den = 2 * (2 * k + 1) * (2 * k - mp - mm);
        if den == 0 {
            return None;
        }
        let num = 8 * k * k + 8 * k - 2 * mp * mp - 2 * mp - 2 * mm * mm - 2 * mm + 1;
        Some((num, den))
    }
}

/// Closed form of `phi` on boundary profiles:
/// `(8k^2 + 8k - 2m+^2 - 2m+ - 2m-^2 - 2m- + 1) / (2(2k+1)(2k - m+ - m-))`.
/// It agrees with [`phi`] of the expanded tuple whenever the tuple is not
/// dominated.
pub fn phi_boundary(p: &BoundaryParams) -> Result<Rational> {
    let (num, den) = p.closed_form().ok_or(Error::DegenerateBoundary {
        k: p.k,
        m_minus: p.m_minus,
        m_plus: p.m_plus,
    })?;
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// Exhaustive maximum of [`phi_boundary`] over non-dominated parameters
/// (`m_minus + m_plus + 1 <= k`) together with the first maximizer.
pub fn boundary_phi_max(k: u64) -> Result<(Rational, BoundaryParams)> {
    if k == 0 {
        return Err(Error::InputDomain("k must be positive".into()));
    }
    let mut best: Option<((i128, i128), BoundaryParams)> = None;
    for m_minus in 0..k {
        for m_plus in 0..(k - m_minus) {
            let p = BoundaryParams { k, m_minus, m_plus };
            let (num, den) = p.closed_form().expect("den > 0 when non-dominated");
            let better = match &best {
                None => true,
                // Denominators are positive, so cross-multiplication is exact.
                Some(((bn, bd), _)) => num * bd > bn * den,
            };
            if better {
                best = Some(((num, den), p));
            }
        }
    }
    let ((num, den), p) = best.expect("(0, 0) is always feasible");
    Ok((Rational::new(BigInt::from(num), BigInt::from(den)), p))
}

/// `(7k^2 + 8k + 2) / (4k^2 + 6k + 2)`, attained by [`boundary_phi_max`] at
/// odd `k`.
pub fn boundary_phi_bound(k: u64) -> Rational {
    let k = k as i64;
    frac::ratio(7 * k * k + 8 * k + 2, 4 * k * k + 6 * k + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::social_cost;
    use crate::frac::ratio;
    use crate::mechanism::{pcd, random_dictator};

    fn p(s: &str) -> Profile {
        Profile::parse_list(s).unwrap()
    }

    fn seg(s: &str) -> SegmentProfile {
        SegmentProfile::parse_list(s).unwrap()
    }

    #[test]
    fn normalizes() {
        assert_eq!(normalize(&p("1/20,3/10,3/10")).unwrap().profile(), &p("-1/4,0,0"));
        let b = p("-1/4,0,1/4");
        assert_eq!(normalize(&b).unwrap().profile(), &b);
        assert_eq!(normalize(&p("1/3,1/3,1/3")).unwrap().profile(), &p("0,0,0"));
        assert!(normalize(&p("0,1/4")).is_err());
    }

    #[test]
    fn normalization_check() {
        assert!(is_normalized(&p("-1/4,0,1/4")));
        assert!(!is_normalized(&p("1/20,3/10,3/10")));
        assert!(is_normalized(&p("0,0,0")));
        assert!(!is_normalized(&p("0,-1/4,1/4")));
        assert!(NormalizedProfile::try_from(p("0,1/4,0")).is_err());
    }

    #[test]
    fn closed_form_costs() {
        let cases = [
            ("0,0,1/2", ratio(2, 3), ratio(1, 2)),
            ("-1/4,0,1/4", ratio(2, 3), ratio(5, 8)),
            ("0,0,0", ratio(0, 1), ratio(0, 1)),
        ];
        for (s, rd, pc) in cases {
            let b = normalize(&p(s)).unwrap();
            assert_eq!(sc_cut_rd(&b), rd, "{s}");
            assert_eq!(sc_cut_pcd(&b), pc, "{s}");
            let direct_rd = social_cost(b.profile(), &random_dictator(b.profile()), MetricKind::Cut);
            let direct_pcd =
                social_cost(b.profile(), &pcd(b.profile()).unwrap(), MetricKind::Cut);
            assert_eq!(direct_rd, rd, "{s}");
            assert_eq!(direct_pcd, pc, "{s}");
        }
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(&seg("0,0,1/2")), ratio(7, 6));
        assert_eq!(phi(&seg("-1/2,0,1/2")), ratio(17, 12));
        assert_eq!(phi(&seg("-1/4,0,1/4")), ratio(31, 24));
        let zero = normalize(&p("0,0,0")).unwrap();
        assert_eq!(phi_normalized(&zero), Err(Error::PhiUndefined));
    }

    #[test]
    fn segment_profile_validation() {
        assert!(SegmentProfile::parse_list("0,0,0").is_err());
        assert!(SegmentProfile::parse_list("0,1/4,1/2").is_err());
        assert!(SegmentProfile::parse_list("1/4,0,1/2").is_err());
        assert!(SegmentProfile::parse_list("-1,0,1/2").is_err());
        assert!(SegmentProfile::parse_list("0,1/2").is_err());
    }

    #[test]
    fn counting() {
        assert_eq!(nonboundary_count(&seg("-1/2,0,1/2")), 0);
        assert_eq!(nonboundary_count(&seg("-1/4,0,1/4")), 2);
        assert_eq!(nonboundary_count(&seg("0,0,1/3")), 1);
        assert!(is_dominated(&seg("0,0,1/2")));
        assert!(!is_dominated(&seg("-1/2,0,1/2")));
        assert!(is_dominated(&seg("0,0,0,1/2,1/2")));
    }

    #[test]
    fn reduction() {
        let start = seg("-1/4,0,1/4");
        let out = reduce_to_boundary(&start);
        assert_eq!(nonboundary_count(&out), 0);
        assert!(phi(&out) >= ratio(31, 24));
        assert_eq!(out, seg("-1/2,0,1/2"));

        let b = seg("-1/2,0,1/2");
        assert_eq!(reduce_to_boundary(&b), b);
        assert_eq!(reduction_trace(&b).len(), 1);

        assert_eq!(reduce_to_boundary(&seg("0,0,1/3")), seg("0,0,1/2"));
        assert!(phi(&seg("0,0,1/2")) >= phi(&seg("0,0,1/3")));
    }

    #[test]
    fn negative_values_use_mirrored_neighbours() {
        let b = seg("-1/3,-1/5,0,1/4,1/2");
        assert_eq!(neighbours(&b, &ratio(-1, 3)), (ratio(-1, 2), ratio(-1, 5)));
        assert_eq!(neighbours(&b, &ratio(1, 4)), (ratio(0, 1), ratio(1, 2)));
    }

    #[test]
    fn boundary_closed_form() {
        let b = BoundaryParams::new(1, 0, 0).unwrap();
        assert_eq!(phi_boundary(&b).unwrap(), ratio(17, 12));
        assert_eq!(phi(&b.expand().unwrap()), ratio(17, 12));

        let b = BoundaryParams::new(2, 1, 0).unwrap();
        assert_eq!(phi_boundary(&b).unwrap(), ratio(3, 2));
        assert_eq!(b.expand().unwrap(), seg("-1/2,0,0,1/2,1/2"));
        assert_eq!(phi(&b.expand().unwrap()), ratio(3, 2));

        // Dominated parameters still evaluate.
        let d = BoundaryParams::new(1, 0, 1).unwrap();
        assert!(d.is_dominated());
        assert!(phi_boundary(&d).is_ok());

        let degenerate = BoundaryParams::new(1, 1, 1).unwrap();
        assert!(matches!(
            phi_boundary(&degenerate),
            Err(Error::DegenerateBoundary { .. })
        ));
        assert!(BoundaryParams::new(2, 3, 0).is_err());
    }

    #[test]
    fn boundary_maximum() {
        assert_eq!(boundary_phi_max(1).unwrap().0, ratio(17, 12));
        let (m, at) = boundary_phi_max(3).unwrap();
        assert_eq!(m, ratio(89, 56));
        assert_eq!((at.m_minus, at.m_plus), (1, 1));
        assert_eq!(boundary_phi_bound(3), ratio(89, 56));
    }
}
