use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::cycle::CyclePoint;
use crate::frac::{self, Rational};
use crate::{Error, Result};

/// A finite distribution over cycle points. Equal points are merged and
/// zero-probability entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Lottery(BTreeMap<CyclePoint, Rational>);

impl Lottery {
    pub fn new<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (CyclePoint, Rational)>,
    {
        let l = Self::merged(entries);
        let mut total = Rational::zero();
        for (v, p) in &l.0 {
            if *p < Rational::zero() || *p > Rational::one() {
                return Err(Error::InvalidLottery(format!(
                    "probability {} at {v} is outside [0, 1]",
                    frac::format(p)
                )));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(Error::InvalidLottery(format!(
                "probabilities sum to {}",
                frac::format(&total)
            )));
        }
        Ok(l)
    }

    pub(crate) fn merged<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (CyclePoint, Rational)>,
    {
        let mut m: BTreeMap<CyclePoint, Rational> = BTreeMap::new();
        for (v, p) in entries {
            *m.entry(v).or_insert_with(Rational::zero) += p;
        }
        m.retain(|_, p| !p.is_zero());
        Lottery(m)
    }

    pub fn point(v: CyclePoint) -> Self {
        Lottery(BTreeMap::from([(v, Rational::one())]))
    }

    pub fn prob(&self, v: &CyclePoint) -> Rational {
        self.0.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CyclePoint, &Rational)> {
        self.0.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &CyclePoint> {
        self.0.keys()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pointwise average over the union of supports.
    pub fn mix(&self, other: &Lottery) -> Lottery {
        let h = frac::half();
        Lottery::merged(
            self.iter()
                .chain(other.iter())
                .map(|(v, p)| (v.clone(), p * &h)),
        )
    }

    /// Pushes the lottery forward along a point map (rotation, reflection).
    pub fn map_points<F: Fn(&CyclePoint) -> CyclePoint>(&self, f: F) -> Lottery {
        Lottery::merged(self.iter().map(|(v, p)| (f(v), p.clone())))
    }
}

impl fmt::Display for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, p)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}: {}", frac::format(p))?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Lottery {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (v, p) in &self.0 {
            m.serialize_entry(&v.to_string(), &frac::format(p))?;
        }
        m.end()
    }
}
