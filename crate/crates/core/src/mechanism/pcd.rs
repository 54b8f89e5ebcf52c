use num_traits::One;

use super::Mechanism;
use crate::cycle::Profile;
use crate::frac::Rational;
use crate::lottery::Lottery;
use crate::{Error, Result};

/// Proportional Circle Distance, defined for an odd number of agents `n >= 3`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProportionalCircleDistance;

/// Agents are ordered clockwise from the joined endpoint `-1/2`, ties by
/// agent index. The arc opposing the agent at sorted position `p` runs from
/// position `p + k` to position `p - k = p + k + 1 (mod n)`, i.e. it is the
/// gap between two consecutive sorted reports; the `n` gaps tile the cycle.
pub fn pcd(b: &Profile) -> Result<Lottery> {
    let n = b.n();
    if n < 3 || n % 2 == 0 {
        return Err(Error::UnsupportedMechanism {
            mechanism: "pcd".into(),
            n,
        });
    }
    let k = b.k();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| b.reports()[x].cmp(&b.reports()[y]).then(x.cmp(&y)));
    let at = |p: usize| b.reports()[order[p % n]].coord();

    let gap = |q: usize| {
        if q + 1 < n {
            at(q + 1) - at(q)
        } else {
            at(0) + Rational::one() - at(n - 1)
        }
    };
    Ok(Lottery::merged((0..n).map(|p| {
        (b.reports()[order[p]].clone(), gap((p + k) % n))
    })))
}

impl Mechanism for ProportionalCircleDistance {
    fn name(&self) -> String {
        "pcd".into()
    }

    fn apply(&self, b: &Profile) -> Result<Lottery> {
        pcd(b)
    }
}
