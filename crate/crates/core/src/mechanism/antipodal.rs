use super::Mechanism;
use crate::cycle::{antipode, Profile};
use crate::lottery::Lottery;
use crate::Result;

/// Deliberately manipulable mechanism: a point mass on the antipode of the
/// first agent's report. That agent always pays 1/2 when truthful and gains
/// by misreporting, so it exercises the strategyproofness detector.
#[derive(Debug, Clone, Copy, Default)]
pub struct AntipodalDictator;

impl Mechanism for AntipodalDictator {
    fn name(&self) -> String {
        "antipodal-dictator".into()
    }

    fn apply(&self, b: &Profile) -> Result<Lottery> {
        Ok(Lottery::point(antipode(&b.reports()[0])))
    }
}
