#![allow(dead_code)]

use cyclefl::frac::ratio;
use cyclefl::{CyclePoint, Profile};
use proptest::prelude::*;

/// A cycle point `t / d` with `d <= 24`.
pub fn point() -> impl Strategy<Value = CyclePoint> {
    (1i64..=24)
        .prop_flat_map(|d| (Just(d), 0..d))
        .prop_map(|(d, t)| CyclePoint::wrap(ratio(t, d)))
}

pub fn profile(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Profile> {
    prop::collection::vec(point(), n).prop_map(|v| Profile::new(v).unwrap())
}

/// Odd-sized profiles, `n` in {3, 5, 7}.
pub fn odd_profile() -> impl Strategy<Value = Profile> {
    (1usize..=3).prop_flat_map(|k| profile(2 * k + 1..=2 * k + 1))
}

pub fn p(s: &str) -> Profile {
    Profile::parse_list(s).unwrap()
}

/// A point `t / 24`; profiles of these keep exhaustive scans small.
pub fn fine_point() -> impl Strategy<Value = CyclePoint> {
    (0i64..24).prop_map(|t| CyclePoint::wrap(ratio(t, 24)))
}

pub fn fine_profile(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Profile> {
    prop::collection::vec(fine_point(), n).prop_map(|v| Profile::new(v).unwrap())
}
