mod common;

use common::odd_profile;
use cyclefl::cut::{
    boundary_phi_bound, is_dominated, neighbours, nonboundary_count, normalize, phi, phi_boundary,
    phi_normalized, reduce_to_boundary, reduction_trace, sc_cut_pcd, sc_cut_rd, BoundaryParams,
    SegmentProfile,
};
use cyclefl::frac::{self, int, ratio, Rational};
use cyclefl::mechanism::{pcd, random_dictator};
use cyclefl::{approximation_ratio, social_cost, MechanismId, MetricKind};
use num_traits::Zero;
use proptest::prelude::*;

/// Sorted values in [-1/2, 1/2] with the middle one at 0 and some nonzero.
fn segment() -> impl Strategy<Value = SegmentProfile> {
    (1usize..=3, 1i64..=24)
        .prop_flat_map(|(k, d)| {
            let side = prop::collection::vec(0..=d / 2, k);
            (Just(d), side.clone(), side)
        })
        .prop_filter_map("all zero", |(d, neg, pos)| {
            let mut neg: Vec<Rational> = neg.into_iter().map(|j| ratio(-j, d)).collect();
            let mut pos: Vec<Rational> = pos.into_iter().map(|j| ratio(j, d)).collect();
            neg.sort();
            pos.sort();
            let mut v = neg;
            v.push(Rational::zero());
            v.extend(pos);
            SegmentProfile::new(v).ok()
        })
}

proptest! {
    #[test]
    fn closed_forms_agree_with_direct_costs(b in odd_profile()) {
        let nb = normalize(&b).unwrap();
        let p = nb.profile();
        prop_assert_eq!(sc_cut_rd(&nb), social_cost(p, &random_dictator(p), MetricKind::Cut));
        prop_assert_eq!(sc_cut_pcd(&nb), social_cost(p, &pcd(p).unwrap(), MetricKind::Cut));
    }

    #[test]
    fn ratio_bound_chain(b in odd_profile()) {
        let mixed = MechanismId::rd_pcd().build();
        let r = approximation_ratio(mixed.as_ref(), &b).unwrap().ratio;
        let nb = normalize(&b).unwrap();
        prop_assert_eq!(&approximation_ratio(mixed.as_ref(), nb.profile()).unwrap().ratio, &r);
        if let Ok(p) = phi_normalized(&nb) {
            prop_assert!(r <= p);
            prop_assert!(p <= ratio(7, 4));
        } else {
            prop_assert!(b.is_unanimous());
        }
    }

    #[test]
    fn reduction_is_monotone(b in segment()) {
        let trace = reduction_trace(&b);
        for w in trace.windows(2) {
            prop_assert!(nonboundary_count(&w[1]) < nonboundary_count(&w[0]));
            prop_assert!(phi(&w[1]) >= phi(&w[0]));
        }
        let end = reduce_to_boundary(&b);
        prop_assert_eq!(nonboundary_count(&end), 0);
        prop_assert!(phi(&end) <= ratio(7, 4));
        if is_dominated(&b) {
            let n = b.n() as i64;
            prop_assert!(phi(&b) <= ratio(3, 2) - ratio(1, n));
        }
    }

    #[test]
    fn phi_is_monotone_between_neighbours(b in segment(), picks in prop::collection::vec(1i64..12, 3)) {
        let h = ratio(1, 2);
        let Some(v) = b.image().into_iter().find(|v| !v.is_zero() && *v != h && *v != -h.clone()) else {
            return Ok(());
        };
        let (lo, hi) = neighbours(&b, &v);
        let mut xs: Vec<Rational> = picks
            .into_iter()
            .map(|t| &lo + (&hi - &lo) * ratio(t, 12))
            .collect();
        xs.push(lo.clone());
        xs.push(hi.clone());
        xs.sort();
        xs.dedup();
        let vals: Vec<Rational> = xs
            .iter()
            .filter_map(|x| b.replace(&v, x).ok())
            .map(|s| phi(&s))
            .collect();
        for w in vals.windows(3) {
            let top = w[0].clone().max(w[2].clone());
            let bottom = w[0].clone().min(w[2].clone());
            prop_assert!(w[1] <= top && w[1] >= bottom, "{} around {}", b, frac::format(&v));
        }
    }
}

#[test]
fn boundary_closed_form_matches_expansion() {
    for k in 1..=20u64 {
        for mm in 0..k {
            for mp in 0..k {
                let p = BoundaryParams::new(k, mm, mp).unwrap();
                if p.is_dominated() {
                    continue;
                }
                assert_eq!(
                    phi_boundary(&p).unwrap(),
                    phi(&p.expand().unwrap()),
                    "k={k} m-={mm} m+={mp}"
                );
            }
        }
    }
}

#[test]
fn boundary_bound_stays_below_seven_quarters() {
    for k in 1..=200 {
        let b = boundary_phi_bound(k);
        assert!(b <= ratio(7, 4));
        assert!(b > int(1));
    }
}
