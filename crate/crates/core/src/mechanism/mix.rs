use std::sync::Arc;

use super::Mechanism;
use crate::cycle::Profile;
use crate::lottery::Lottery;
use crate::Result;

/// Half/half mixture of two mechanisms, evaluated on lotteries.
#[derive(Clone)]
pub struct Mixture {
    left: Arc<dyn Mechanism>,
    right: Arc<dyn Mechanism>,
}

impl Mixture {
    pub fn new(left: Arc<dyn Mechanism>, right: Arc<dyn Mechanism>) -> Self {
        Mixture { left, right }
    }
}

pub fn mix(l1: &Lottery, l2: &Lottery) -> Lottery {
    l1.mix(l2)
}

impl Mechanism for Mixture {
    fn name(&self) -> String {
        format!("{}+{}", self.left.name(), self.right.name())
    }

    fn apply(&self, b: &Profile) -> Result<Lottery> {
        let l1 = self.left.apply(b)?;
        let l2 = self.right.apply(b)?;
        Ok(mix(&l1, &l2))
    }
}
