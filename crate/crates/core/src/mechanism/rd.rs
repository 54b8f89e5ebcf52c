use num_bigint::BigInt;

use super::Mechanism;
use crate::cycle::Profile;
use crate::frac::Rational;
use crate::lottery::Lottery;
use crate::Result;

/// Random Dictator: each reported point with probability proportional to the
/// number of agents reporting it.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomDictator;

pub fn random_dictator(b: &Profile) -> Lottery {
    let share = Rational::new(BigInt::from(1), BigInt::from(b.n()));
    Lottery::merged(b.reports().iter().map(|v| (v.clone(), share.clone())))
}

impl Mechanism for RandomDictator {
    fn name(&self) -> String {
        "rd".into()
    }

    fn apply(&self, b: &Profile) -> Result<Lottery> {
        Ok(random_dictator(b))
    }
}
