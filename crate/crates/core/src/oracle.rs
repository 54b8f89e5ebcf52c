//! Slow reference paths used to cross-check the fast ones: optimal cost by
//! scanning a dense grid, and searches over all `l^n` raw profiles with no
//! symmetry reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cycle::Profile;
use crate::frac::Rational;
use crate::mechanism::{approximation_ratio, Mechanism};
use crate::search::GridSpec;
use crate::Result;

fn arc(a: &Rational, b: &Rational) -> Rational {
    let d = (b - a).abs().fract();
    let wrap = Rational::one() - &d;
    if wrap < d {
        wrap
    } else {
        d
    }
}

/// Minimum social cost over the `resolution` points `j / resolution`.
pub fn scan_opt(b: &Profile, resolution: u64) -> Rational {
    let res = BigInt::from(resolution);
    (0..resolution)
        .map(|j| {
            let v = Rational::new(BigInt::from(j), res.clone());
            b.reports()
                .iter()
                .fold(Rational::zero(), |acc, x| acc + arc(x.coord(), &v))
        })
        .min()
        .expect("resolution >= 1")
}

/// [`scan_opt`] on a grid fine enough to contain every report and antipode,
/// which makes it exact.
pub fn exact_scan_opt(b: &Profile) -> Rational {
    let lcm = b
        .reports()
        .iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.coord().denom()));
    let res: u64 = (lcm * 2u32).try_into().expect("denominators fit in u64");
    scan_opt(b, res)
}

/// All `l^n` labelled position tuples, in base-`l` counting order.
pub fn raw_tuples(n: usize, l: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (l as u128).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = (code % l as u128) as usize;
            code /= l as u128;
        }
        t
    })
}

/// Maximum ratio over every raw grid profile and the number examined.
pub fn raw_worst_case(m: &dyn Mechanism, n: usize, l: usize) -> Result<(Rational, u128)> {
    let g = GridSpec::new(l)?;
    let mut best = Rational::zero();
    let mut count = 0u128;
    for t in raw_tuples(n, l) {
        let r = approximation_ratio(m, &g.profile_of(&t))?.ratio;
        best = best.max(r);
        count += 1;
    }
    Ok((best, count))
}

/// Number of symmetry classes of `G_l^n`, by flood fill over raw tuples
/// using generators: adjacent agent swaps, one-step rotation, reflection.
pub fn orbit_count(n: usize, l: usize) -> usize {
    let total = l.pow(n as u32);
    let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &p| acc * l + p);
    let decode = |mut c: usize| {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = c % l;
            c /= l;
        }
        t
    };
    let z = l / 2;
    let mut seen = vec![false; total];
    let mut classes = 0;
    for start in 0..total {
        if seen[start] {
            continue;
        }
        classes += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            let t = decode(c);
            let mut next = Vec::new();
            for i in 0..n.saturating_sub(1) {
                let mut s = t.clone();
                s.swap(i, i + 1);
                next.push(s);
            }
            next.push(t.iter().map(|&p| (p + 1) % l).collect());
            next.push(t.iter().map(|&p| (2 * z + l - p) % l).collect());
            for s in next {
                let code = encode(&s);
                if !seen[code] {
                    seen[code] = true;
                    stack.push(code);
                }
            }
        }
    }
    classes
}

/// Checks a claimed optimum against [`exact_scan_opt`].
pub fn opt_agrees(b: &Profile, claimed: &Rational) -> bool {
    exact_scan_opt(b) == *claimed
}
