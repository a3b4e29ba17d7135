//! The 8-point candidate family and its pruning.
//!
//! In normalized position an arc hyperfocused on `Z = 0` contains
//! `(0,0), (0,1), (1,0)` and has `(0,1,0)` as a focus, so its points pair up on
//! vertical lines. A candidate sub-arc is those three points, the partner
//! `(1,a)` of `(1,0)`, and two further vertical pairs `{(c,d),(c,e)}`,
//! `{(f,g),(f,h)}` with `1 < c < f`, `d < e`, `g < h`.

use hyperfocus_core::arcs::{Arc, FocusSet};
use hyperfocus_core::{Felt, ProjLine, ProjPoint};

use crate::kernel::{Code, Mask, SearchSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate8 {
    pub a: Felt,
    pub c: Felt,
    pub d: Felt,
    pub e: Felt,
    pub f: Felt,
    pub g: Felt,
    pub h: Felt,
}

impl Candidate8 {
    pub fn points(&self) -> [(Felt, Felt); 8] {
        let (zero, one) = (Felt::ZERO, Felt::ONE);
        [
            (zero, zero),
            (zero, one),
            (one, zero),
            (one, self.a),
            (self.c, self.d),
            (self.c, self.e),
            (self.f, self.g),
            (self.f, self.h),
        ]
    }

    pub fn is_normalized(&self) -> bool {
        !self.a.is_zero() && Felt::ONE < self.c && self.c < self.f && self.d < self.e && self.g < self.h
    }
}

/// Every normalized candidate, ordered by `(a, c, d, e, f, g, h)` with `a`
/// running over the Frobenius orbit representatives.
pub fn enumerate_candidates8(space: &SearchSpace) -> impl Iterator<Item = Candidate8> + '_ {
    let q = space.q();
    space.a_values().iter().flat_map(move |&a| {
        (2..q).flat_map(move |c| {
            (0..q).flat_map(move |d| {
                (d + 1..q).flat_map(move |e| {
                    (c + 1..q).flat_map(move |f| {
                        (0..q).flat_map(move |g| {
                            (g + 1..q).map(move |h| Candidate8 {
                                a,
                                c: Felt(c),
                                d: Felt(d),
                                e: Felt(e),
                                f: Felt(f),
                                g: Felt(g),
                                h: Felt(h),
                            })
                        })
                    })
                })
            })
        })
    })
}

/// Number of normalized candidates for one value of `a`.
pub fn candidates_per_a(q: u64) -> u64 {
    let pairs = q * (q - 1) / 2;
    let columns = (q - 2) * (q - 3) / 2;
    columns * pairs * pairs
}

/// Admissible focus counts of the 8-point sub-arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FocusBounds {
    pub min: u32,
    pub max: u32,
}

impl FocusBounds {
    /// `[11, 11]` for 12-arcs, otherwise `[9, k - 1]`.
    pub fn for_target(k: u32) -> Self {
        if k == 12 {
            FocusBounds { min: 11, max: 11 }
        } else {
            FocusBounds { min: 9, max: k - 1 }
        }
    }

    pub fn contains(&self, n: u32) -> bool {
        (self.min..=self.max).contains(&n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    NotAnArc,
    TooFewFocuses(u32),
    TooManyFocuses(u32),
}

/// An 8-arc that survived pruning, with its focus directions on `Z = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prepared8 {
    pub points: [Code; 8],
    pub focus: Mask,
}

impl Prepared8 {
    pub fn focus_count(&self) -> u32 {
        self.focus.count_ones()
    }

    /// For each direction, the bitmask of points paired by a secant in that direction.
    pub fn paired(&self, space: &SearchSpace) -> Vec<u8> {
        let mut paired = vec![0u8; space.q() as usize + 1];
        for i in 0..8 {
            for j in i + 1..8 {
                paired[space.slope(self.points[i], self.points[j]) as usize] |= 1 << i | 1 << j;
            }
        }
        paired
    }

    pub fn arc(&self, space: &SearchSpace) -> Arc {
        let pts = self.points.iter().map(|&p| space.point(p)).collect();
        Arc::new(space.ctx(), pts).expect("pruned candidates are arcs")
    }

    pub fn focus_set(&self, space: &SearchSpace) -> FocusSet {
        let ctx = space.ctx();
        let mut points: Vec<ProjPoint> = (0..=space.q() as u8)
            .filter(|&m| self.focus >> m & 1 == 1)
            .map(|m| space.direction_point(m))
            .collect();
        points.sort_by_key(|p| p.index(ctx));
        FocusSet {
            line: ProjLine::infinity(),
            points,
        }
    }

    /// For each focus, the arc points whose tangent passes through it.
    pub fn tangent_pencils(&self, space: &SearchSpace) -> Vec<(ProjPoint, Vec<ProjPoint>)> {
        let paired = self.paired(space);
        (0..=space.q() as u8)
            .filter(|&m| self.focus >> m & 1 == 1)
            .map(|m| {
                let touch = (0..8)
                    .filter(|i| paired[m as usize] >> i & 1 == 0)
                    .map(|i| space.point(self.points[i]))
                    .collect();
                (space.direction_point(m), touch)
            })
            .collect()
    }
}

pub fn prune8(space: &SearchSpace, cand: &Candidate8, bounds: FocusBounds) -> Result<Prepared8, Rejection> {
    let mut pts: Vec<Code> = Vec::with_capacity(8);
    let mut focus: Mask = 0;
    for (x, y) in cand.points() {
        let p = space.code(x, y);
        let bits = space.join(&pts, p).ok_or(Rejection::NotAnArc)?;
        focus |= bits;
        pts.push(p);
    }
    let n = focus.count_ones();
    if n > bounds.max {
        return Err(Rejection::TooManyFocuses(n));
    }
    if n < bounds.min {
        return Err(Rejection::TooFewFocuses(n));
    }
    Ok(Prepared8 {
        points: pts.try_into().expect("eight points"),
        focus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperfocus_core::FieldCtx;
    use std::collections::BTreeSet;

    #[test]
    fn a_ranges_over_orbit_representatives() {
        let ctx = FieldCtx::with_default_modulus(5).unwrap();
        let space = SearchSpace::new(&ctx).unwrap();
        let logs: Vec<_> = space.a_values().iter().map(|&a| ctx.log(a).unwrap()).collect();
        assert_eq!(logs, vec![0, 1, 3, 5, 7, 11, 15]);
    }

    // Every (c,d,e,f,g,h) with distinct columns outside {0,1} and distinct
    // rows per column, deduplicated by point set.
    fn unnormalized_count(q: u32, a: Felt) -> usize {
        let mut seen = BTreeSet::new();
        for c in 2..q {
            for f in 2..q {
                if c == f {
                    continue;
                }
                for d in 0..q {
                    for e in 0..q {
                        if d == e {
                            continue;
                        }
                        for g in 0..q {
                            for h in 0..q {
                                if g == h {
                                    continue;
                                }
                                let mut set = vec![(c, d), (c, e), (f, g), (f, h)];
                                set.sort();
                                seen.insert((a, set));
                            }
                        }
                    }
                }
            }
        }
        seen.len()
    }

    #[test]
    fn normalized_count_matches_dedup_oracle() {
        for s in [3u32, 4] {
            let ctx = FieldCtx::with_default_modulus(s).unwrap();
            let space = SearchSpace::new(&ctx).unwrap();
            let a = space.a_values()[1];
            let normalized = enumerate_candidates8(&space).filter(|c| c.a == a).count();
            assert_eq!(normalized, unnormalized_count(ctx.q(), a));
            assert_eq!(normalized as u64, candidates_per_a(ctx.q() as u64));
        }
    }

    #[test]
    fn yielded_candidates_are_normalized_and_ordered() {
        let ctx = FieldCtx::with_default_modulus(3).unwrap();
        let space = SearchSpace::new(&ctx).unwrap();
        let all: Vec<_> = enumerate_candidates8(&space).collect();
        assert!(all.iter().all(|c| c.is_normalized() && c.d != c.e && c.g != c.h));
        let key = |c: &Candidate8| {
            let pos = space.a_values().iter().position(|&a| a == c.a).unwrap();
            (pos, c.c, c.d, c.e, c.f, c.g, c.h)
        };
        assert!(all.windows(2).all(|w| key(&w[0]) < key(&w[1])));
    }

    #[test]
    fn prune_rejects_collinear_points() {
        let ctx = FieldCtx::with_default_modulus(5).unwrap();
        let space = SearchSpace::new(&ctx).unwrap();
        let a = Felt(1);
        // (2, 2) is on the line y = x through (0,0) and (1,1).
        let cand = Candidate8 {
            a,
            c: Felt(2),
            d: Felt(2),
            e: Felt(3),
            f: Felt(4),
            g: Felt(5),
            h: Felt(6),
        };
        assert_eq!(
            prune8(&space, &cand, FocusBounds::for_target(12)),
            Err(Rejection::NotAnArc)
        );
    }

    #[test]
    fn bounds_by_target() {
        assert_eq!(FocusBounds::for_target(12), FocusBounds { min: 11, max: 11 });
        assert_eq!(FocusBounds::for_target(14), FocusBounds { min: 9, max: 13 });
    }

    #[test]
    fn prepared_views_agree_with_core() {
        use hyperfocus_core::arcs;
        let ctx = FieldCtx::with_default_modulus(5).unwrap();
        let space = SearchSpace::new(&ctx).unwrap();
        let wide = FocusBounds { min: 0, max: 32 };
        let prepared: Vec<_> = enumerate_candidates8(&space)
            .step_by(100_003)
            .filter_map(|c| prune8(&space, &c, wide).ok())
            .take(20)
            .collect();
        assert!(!prepared.is_empty());
        let z = ProjLine::infinity();
        for p in prepared {
            let arc = p.arc(&space);
            assert_eq!(arcs::focus_set(&ctx, &arc, &z).unwrap(), p.focus_set(&space));
            for (q, touch) in p.tangent_pencils(&space) {
                assert_eq!(arcs::tangents_through(&ctx, &arc, &q).unwrap().len(), touch.len());
            }
        }
    }
}
