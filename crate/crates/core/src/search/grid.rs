use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::cycle::{CyclePoint, Profile};
use crate::frac::{self, Rational};
use crate::{Error, Result};

/// `G_l`: `l` equally spaced points of the unit cycle including 0.
///
/// Points are addressed by their position `0..l` in ascending coordinate
/// order, so position `p` sits at `(p - l/2) / l` (integer division). A
/// rotation by one grid step is `p -> p + 1 (mod l)` and reflection through
/// 0 is `p -> 2*(l/2) - p (mod l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GridSpec {
    pub l: usize,
}

impl GridSpec {
    pub fn new(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::Config(format!("a grid needs at least 2 points, got {l}")));
        }
        Ok(GridSpec { l })
    }

    pub fn coord(&self, position: usize) -> Rational {
        frac::ratio(position as i64 - (self.l / 2) as i64, self.l as i64)
    }

    pub fn point(&self, position: usize) -> CyclePoint {
        CyclePoint::wrap(self.coord(position))
    }

    pub fn points(&self) -> Vec<CyclePoint> {
        (0..self.l).map(|p| self.point(p)).collect()
    }

    pub fn position(&self, v: &CyclePoint) -> Result<usize> {
        let scaled = v.coord() * Rational::from_integer(BigInt::from(self.l));
        let off_grid = || Error::OffGrid {
            point: v.to_string(),
            l: self.l,
        };
        if !scaled.denom().is_one() {
            return Err(off_grid());
        }
        let j: i64 = scaled.to_integer().try_into().map_err(|_| off_grid())?;
        let p = j + (self.l / 2) as i64;
        if (0..self.l as i64).contains(&p) {
            Ok(p as usize)
        } else {
            Err(off_grid())
        }
    }

    pub fn positions_of(&self, b: &Profile) -> Result<Vec<usize>> {
        b.reports().iter().map(|v| self.position(v)).collect()
    }

    pub fn profile_of(&self, positions: &[usize]) -> Profile {
        Profile::new(positions.iter().map(|&p| self.point(p)).collect())
            .expect("non-empty position list")
    }

    fn image(&self, p: usize, shift: usize, reflect: bool) -> usize {
        let l = self.l;
        let q = if reflect { (2 * (l / 2) + l - p) % l } else { p };
        (q + shift) % l
    }

    /// Sorted images of a position multiset under all `2l` rotations and
    /// reflections, deduplicated.
    pub fn orbit_multisets(&self, positions: &[usize]) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(2 * self.l);
        for reflect in [false, true] {
            for shift in 0..self.l {
                let mut img: Vec<usize> =
                    positions.iter().map(|&p| self.image(p, shift, reflect)).collect();
                img.sort_unstable();
                out.push(img);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Lexicographically smallest sorted image.
    pub fn canonical_positions(&self, positions: &[usize]) -> Vec<usize> {
        let mut best: Option<Vec<usize>> = None;
        let mut img = vec![0; positions.len()];
        for reflect in [false, true] {
            for shift in 0..self.l {
                for (dst, &p) in img.iter_mut().zip(positions) {
                    *dst = self.image(p, shift, reflect);
                }
                img.sort_unstable();
                if best.as_ref().is_none_or(|b| img < *b) {
                    best = Some(img.clone());
                }
            }
        }
        best.expect("l >= 2")
    }

    /// Number of raw (agent-labelled) profiles in the orbit of a multiset.
    pub fn orbit_size(&self, positions: &[usize]) -> u128 {
        let multisets = self.orbit_multisets(positions).len() as u128;
        multisets * arrangements(positions)
    }
}

/// Distinct orderings of a multiset: `n! / prod(mult!)`.
pub fn arrangements(positions: &[usize]) -> u128 {
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    let mut result: u128 = 1;
    let mut run = 0u128;
    for (i, p) in sorted.iter().enumerate() {
        run = if i > 0 && sorted[i - 1] == *p { run + 1 } else { 1 };
        // result * (i+1) / run stays integral at every step.
        result = result * (i as u128 + 1) / run;
    }
    result
}

/// `C(a, b)`, saturating at `u128::MAX`.
pub fn binomial(a: u128, b: u128) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = match acc.checked_mul(a - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Canonical representative of a grid profile under agent permutations, grid
/// rotations and reflection.
pub fn canonicalize(b: &Profile, g: &GridSpec) -> Result<Profile> {
    let pos = g.positions_of(b)?;
    Ok(g.profile_of(&g.canonical_positions(&pos)))
}

/// A canonical class of grid profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridClass {
    /// Lex-minimal sorted positions.
    pub positions: Vec<usize>,
    /// Raw profiles (of `l^n`) in this class.
    pub orbit_size: u128,
}

/// Size of the candidate space walked by [`enumerate_classes`] without a
/// distinct-point restriction: multisets of `n` positions containing 0.
pub fn enumeration_size(n: usize, l: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    binomial((l + n - 2) as u128, (n - 1) as u128)
}

/// One representative per canonical class. Candidates are non-decreasing
/// position tuples starting at 0 (every canonical form does), pruned by the
/// distinct-point limit, and kept when they equal their own canonical form.
pub fn enumerate_classes(n: usize, g: &GridSpec, max_distinct: Option<usize>) -> Vec<GridClass> {
    let limit = max_distinct.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    if n == 0 || limit == 0 {
        return out;
    }
    let mut cur = Vec::with_capacity(n);
    cur.push(0);
    walk(&mut cur, 1, n, g, limit, &mut out);
    out
}

fn walk(
    cur: &mut Vec<usize>,
    distinct: usize,
    n: usize,
    g: &GridSpec,
    limit: usize,
    out: &mut Vec<GridClass>,
) {
    if cur.len() == n {
        if g.canonical_positions(cur) == *cur {
            out.push(GridClass {
                positions: cur.clone(),
                orbit_size: g.orbit_size(cur),
            });
        }
        return;
    }
    let last = *cur.last().expect("starts with 0");
    for p in last..g.l {
        let d = distinct + usize::from(p != last);
        if d > limit {
            break;
        }
        cur.push(p);
        walk(cur, d, n, g, limit, out);
        cur.pop();
    }
}

/// Every non-decreasing position tuple of length `n` (all sorted grid
/// profiles, no symmetry reduction).
pub fn sorted_tuples(n: usize, l: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, n: usize, l: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let from = cur.last().copied().unwrap_or(0);
        for p in from..l {
            cur.push(p);
            rec(cur, n, l, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), n, l, &mut out);
    out
}

/// Sum of orbit sizes; equals `l^n` for an unrestricted enumeration.
pub fn covered_profiles(classes: &[GridClass]) -> u128 {
    classes.iter().map(|c| c.orbit_size).sum()
}
