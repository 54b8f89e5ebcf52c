//! Mechanisms map profiles to lotteries. Each one implements [`Mechanism`]
//! and is registered by name in a [`MechanismRegistry`]; names joined with
//! `+` resolve to half/half mixtures, so `"rd+pcd"` is the mixed mechanism.

mod antipodal;
mod mix;
mod pcd;
mod rd;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

pub use antipodal::AntipodalDictator;
pub use mix::{mix, Mixture};
pub use pcd::{pcd, ProportionalCircleDistance};
pub use rd::{random_dictator, RandomDictator};

use crate::cycle::{optimal_cost, social_cost, CyclePoint, MetricKind, Profile};
use crate::frac::{self, Rational};
use crate::lottery::Lottery;
use crate::{Error, Result};

pub trait Mechanism: Send + Sync {
    /// Registry name, e.g. `rd` or `rd+pcd`.
    fn name(&self) -> String;

    fn apply(&self, b: &Profile) -> Result<Lottery>;
}

/// Typed handle for the mechanisms of interest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MechanismId {
    Rd,
    Pcd,
    Mix(Box<MechanismId>, Box<MechanismId>),
}

impl MechanismId {
    pub fn rd_pcd() -> Self {
        MechanismId::Mix(Box::new(MechanismId::Rd), Box::new(MechanismId::Pcd))
    }

    pub fn build(&self) -> Arc<dyn Mechanism> {
        match self {
            MechanismId::Rd => Arc::new(RandomDictator),
            MechanismId::Pcd => Arc::new(ProportionalCircleDistance),
            MechanismId::Mix(a, b) => Arc::new(Mixture::new(a.build(), b.build())),
        }
    }
}

impl fmt::Display for MechanismId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MechanismId::Rd => f.write_str("rd"),
            MechanismId::Pcd => f.write_str("pcd"),
            MechanismId::Mix(a, b) => write!(f, "{a}+{b}"),
        }
    }
}

impl FromStr for MechanismId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let atom = |t: &str| match t.trim().to_ascii_lowercase().as_str() {
            "rd" => Ok(MechanismId::Rd),
            "pcd" => Ok(MechanismId::Pcd),
            _ => Err(Error::UnknownMechanism(t.trim().to_string())),
        };
        let mut parts = s.split('+');
        let first = atom(parts.next().unwrap_or_default())?;
        parts.try_fold(first, |acc, t| {
            Ok(MechanismId::Mix(Box::new(acc), Box::new(atom(t)?)))
        })
    }
}

pub fn apply(m: &MechanismId, b: &Profile) -> Result<Lottery> {
    m.build().apply(b)
}

/// Name-indexed set of mechanism strategies.
#[derive(Clone, Default)]
pub struct MechanismRegistry {
    entries: BTreeMap<String, Arc<dyn Mechanism>>,
}

impl MechanismRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// `rd`, `pcd` and the `antipodal-dictator` test double.
    pub fn with_builtins() -> Self {
        let mut r = Self::new();
        r.register(Arc::new(RandomDictator));
        r.register(Arc::new(ProportionalCircleDistance));
        r.register(Arc::new(AntipodalDictator));
        r
    }

    pub fn register(&mut self, m: Arc<dyn Mechanism>) {
        self.entries.insert(m.name(), m);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Looks up a name; `a+b+c` becomes `((a+b)+c)`.
    pub fn resolve(&self, names: &str) -> Result<Arc<dyn Mechanism>> {
        let atom = |t: &str| {
            let key = t.trim().to_ascii_lowercase();
            self.entries
                .get(&key)
                .cloned()
                .ok_or_else(|| Error::UnknownMechanism(t.trim().to_string()))
        };
        let mut parts = names.split('+');
        let first = atom(parts.next().unwrap_or_default())?;
        parts.try_fold(first, |acc, t| {
            Ok(Arc::new(Mixture::new(acc, atom(t)?)) as Arc<dyn Mechanism>)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApxResult {
    #[serde(with = "frac::serde_str")]
    pub ratio: Rational,
    #[serde(with = "frac::serde_str")]
    pub mechanism_sc: Rational,
    #[serde(with = "frac::serde_str")]
    pub opt: Rational,
    pub opt_point: CyclePoint,
}

/// `sc_b(M(b)) / opt_b` under the cycle metric, or 1 for unanimous profiles.
pub fn approximation_ratio(m: &dyn Mechanism, b: &Profile) -> Result<ApxResult> {
    let l = m.apply(b)?;
    ratio_of_lottery(b, &l)
}

pub fn ratio_of_lottery(b: &Profile, l: &Lottery) -> Result<ApxResult> {
    let (opt, opt_point) = optimal_cost(b);
    let sc = social_cost(b, l, MetricKind::Cycle);
    let ratio = if opt.is_zero() {
        if !sc.is_zero() {
            return Err(Error::UnboundedRatio(frac::format(&sc)));
        }
        Rational::one()
    } else {
        &sc / &opt
    };
    Ok(ApxResult {
        ratio,
        mechanism_sc: sc,
        opt,
        opt_point,
    })
}
