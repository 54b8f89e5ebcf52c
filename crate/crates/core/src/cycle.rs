//! Geometry of the unit cycle, obtained from `[-1/2, 1/2]` by joining the
//! endpoints. The joined endpoint is represented as `-1/2`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

use crate::frac::{self, half, Rational};
use crate::lottery::Lottery;
use crate::{Error, Result};

/// A point of the unit cycle with coordinate in `[-1/2, 1/2)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclePoint(Rational);

impl CyclePoint {
    /// Accepts coordinates in `[-1/2, 1/2]`; `1/2` becomes `-1/2`.
    pub fn new(coord: Rational) -> Result<Self> {
        let h = half();
        if coord < -h.clone() || coord > h {
            return Err(Error::InputDomain(format!(
                "coordinate {} is outside [-1/2, 1/2]",
                frac::format(&coord)
            )));
        }
        Ok(Self::wrap(coord))
    }

    /// Reduces any rational modulo 1 into `[-1/2, 1/2)`.
    pub fn wrap(coord: Rational) -> Self {
        let shifted = coord + half();
        let reduced = &shifted - shifted.floor();
        CyclePoint(reduced - half())
    }

    pub fn zero() -> Self {
        CyclePoint(Rational::zero())
    }

    pub fn coord(&self) -> &Rational {
        &self.0
    }

    pub fn rotate(&self, by: &Rational) -> Self {
        Self::wrap(&self.0 + by)
    }

    pub fn reflect(&self) -> Self {
        Self::wrap(-self.0.clone())
    }
}

impl fmt::Display for CyclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&frac::format(&self.0))
    }
}

impl fmt::Debug for CyclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CyclePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CyclePoint::new(frac::parse(s)?)
    }
}

impl Serialize for CyclePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CyclePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Selects the distance used for costs: the shortest-arc metric of the
/// cycle, or the line-segment distance obtained by cutting the cycle just
/// before `-1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Cycle,
    Cut,
}

impl MetricKind {
    pub fn distance(self, a: &CyclePoint, b: &CyclePoint) -> Rational {
        match self {
            MetricKind::Cycle => cycle_distance(a, b),
            MetricKind::Cut => cut_distance(a, b),
        }
    }
}

pub fn cycle_distance(a: &CyclePoint, b: &CyclePoint) -> Rational {
    let direct = (&b.0 - &a.0).abs();
    let around = Rational::one() - &direct;
    direct.min(around)
}

pub fn cut_distance(a: &CyclePoint, b: &CyclePoint) -> Rational {
    (&b.0 - &a.0).abs()
}

pub fn antipode(v: &CyclePoint) -> CyclePoint {
    v.rotate(&half())
}

/// Reports of agents `-k..=k`, stored by position `0..n` (agent `i` lives at
/// position `i + k`). Even `n` is representable; mechanisms that need an odd
/// count reject it themselves.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(Vec<CyclePoint>);

impl Profile {
    pub fn new(reports: Vec<CyclePoint>) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::InputDomain("a profile needs at least one agent".into()));
        }
        Ok(Profile(reports))
    }

    pub fn from_coords<I>(coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = Rational>,
    {
        let pts = coords
            .into_iter()
            .map(CyclePoint::new)
            .collect::<Result<Vec<_>>>()?;
        Profile::new(pts)
    }

    /// Comma-separated fractions, e.g. `"-1/4,0,1/4"`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(frac::parse)
            .collect::<Result<Vec<_>>>()?;
        Profile::from_coords(coords)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `(n - 1) / 2`; meaningful for odd `n`.
    pub fn k(&self) -> usize {
        (self.0.len() - 1) / 2
    }

    pub fn is_odd(&self) -> bool {
        self.0.len() % 2 == 1
    }

    pub fn reports(&self) -> &[CyclePoint] {
        &self.0
    }

    /// Report of agent `i` in `-k..=k`.
    pub fn agent(&self, i: isize) -> &CyclePoint {
        &self.0[(i + self.k() as isize) as usize]
    }

    pub fn with_report(&self, position: usize, v: CyclePoint) -> Profile {
        let mut out = self.0.clone();
        out[position] = v;
        Profile(out)
    }

    pub fn sorted(&self) -> Profile {
        let mut out = self.0.clone();
        out.sort();
        Profile(out)
    }

    pub fn rotate(&self, by: &Rational) -> Profile {
        Profile(self.0.iter().map(|p| p.rotate(by)).collect())
    }

    pub fn reflect(&self) -> Profile {
        Profile(self.0.iter().map(CyclePoint::reflect).collect())
    }

    pub fn is_unanimous(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn distinct_count(&self) -> usize {
        let mut v: Vec<&CyclePoint> = self.0.iter().collect();
        v.sort();
        v.dedup();
        v.len()
    }

    pub fn to_list_string(&self) -> String {
        self.0
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_list_string())
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Profile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pts = Vec::<CyclePoint>::deserialize(d)?;
        Profile::new(pts).map_err(D::Error::custom)
    }
}

pub fn expected_cost(v: &CyclePoint, l: &Lottery, m: MetricKind) -> Rational {
    l.iter()
        .fold(Rational::zero(), |acc, (x, p)| acc + p * m.distance(v, x))
}

pub fn social_cost(b: &Profile, l: &Lottery, m: MetricKind) -> Rational {
    b.reports()
        .iter()
        .fold(Rational::zero(), |acc, v| acc + expected_cost(v, l, m))
}

/// Social cost of a single point under the cycle metric.
pub fn point_cost(b: &Profile, v: &CyclePoint, m: MetricKind) -> Rational {
    b.reports()
        .iter()
        .fold(Rational::zero(), |acc, x| acc + m.distance(x, v))
}

/// Reports and their antipodes, sorted and deduplicated. The social cost
/// under the cycle metric is linear between consecutive entries.
pub fn breakpoints(b: &Profile) -> Vec<CyclePoint> {
    let mut pts: Vec<CyclePoint> = b
        .reports()
        .iter()
        .flat_map(|v| [v.clone(), antipode(v)])
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

/// Exact minimum of the social cost over the cycle and every breakpoint that
/// attains it, in ascending order.
pub fn optimal_points(b: &Profile) -> (Rational, Vec<CyclePoint>) {
    let mut best: Option<Rational> = None;
    let mut at = Vec::new();
    for v in breakpoints(b) {
        let c = point_cost(b, &v, MetricKind::Cycle);
        match &best {
            Some(cur) if c > *cur => {}
            Some(cur) if c == *cur => at.push(v),
            _ => {
                best = Some(c);
                at.clear();
                at.push(v);
            }
        }
    }
    (best.expect("profiles are non-empty"), at)
}

/// `opt_b` and its smallest-coordinate minimizer.
pub fn optimal_cost(b: &Profile) -> (Rational, CyclePoint) {
    let (opt, mut at) = optimal_points(b);
    (opt, at.swap_remove(0))
}

/// Maps coordinates of a cycle of length `z` (given in `[0, z)`) onto the
/// unit cycle.
pub fn rescale_profile(raw: &[Rational], z: &Rational) -> Result<Profile> {
    if !z.is_positive() {
        return Err(Error::InputDomain(format!(
            "cycle length {} must be positive",
            frac::format(z)
        )));
    }
    let pts = raw
        .iter()
        .map(|x| {
            if x.is_negative() || x >= z {
                return Err(Error::InputDomain(format!(
                    "coordinate {} is outside [0, {})",
                    frac::format(x),
                    frac::format(z)
                )));
            }
            Ok(CyclePoint::wrap(x / z))
        })
        .collect::<Result<Vec<_>>>()?;
    Profile::new(pts)
}
