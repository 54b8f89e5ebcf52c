//! Strategyproof facility location on the unit cycle.
//!
//! The crate evaluates the Random Dictator (RD) and Proportional Circle
//! Distance (PCD) mechanisms and their half/half mixture with exact rational
//! arithmetic, exposes the cut-based upper bound `phi` together with its
//! boundary-profile closed forms, and runs exhaustive searches over grid
//! profiles for worst-case approximation ratios and strategyproofness.
//!
//! Mechanisms are trait objects (`Mechanism`) looked up by name in a
//! [`MechanismRegistry`]; `"rd+pcd"` resolves to the mixture.

pub mod cut;
pub mod cycle;
mod error;
pub mod frac;
pub mod lottery;
pub mod mechanism;
pub mod oracle;
pub mod search;

pub use cycle::{
    antipode, cut_distance, cycle_distance, expected_cost, optimal_cost, rescale_profile,
    social_cost, CyclePoint, MetricKind, Profile,
};
pub use error::{Error, Result};
pub use frac::Rational;
pub use lottery::Lottery;
pub use mechanism::{approximation_ratio, ApxResult, Mechanism, MechanismId, MechanismRegistry};
