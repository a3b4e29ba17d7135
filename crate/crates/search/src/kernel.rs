//! Affine slope tables for the search inner loops.
//!
//! Affine points are packed as `x << s | y`, which is also their dense point
//! index. For two packed points `p`, `r` the XOR `p ^ r` packs the difference
//! vector, so the direction of the line `pr` on `Z = 0` is one table lookup.
//! Directions are numbered `0..q` by slope, with `q` for vertical lines.

use hyperfocus_core::canon::frobenius_orbit_reps;
use hyperfocus_core::{Felt, FieldCtx, ProjPoint};

use crate::SearchError;

/// Largest extension degree whose `q + 1` directions fit a `u128` mask.
pub const MAX_SEARCH_DEGREE: u32 = 6;

pub type Code = u16;
pub type Mask = u128;

pub struct SearchSpace {
    ctx: FieldCtx,
    slope: Vec<u8>,
    reps: Vec<Felt>,
}

impl SearchSpace {
    pub fn new(ctx: &FieldCtx) -> Result<Self, SearchError> {
        if ctx.s() > MAX_SEARCH_DEGREE {
            return Err(SearchError::UnsupportedField(ctx.s()));
        }
        let q = ctx.q();
        let s = ctx.s();
        let mut slope = vec![u8::MAX; (q * q) as usize];
        for dx in 0..q {
            for dy in 0..q {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let m = if dx == 0 {
                    q
                } else {
                    ctx.div(Felt(dy), Felt(dx)).expect("dx != 0").0
                };
                slope[(dx << s | dy) as usize] = m as u8;
            }
        }
        Ok(SearchSpace {
            ctx: ctx.clone(),
            slope,
            reps: frobenius_orbit_reps(ctx, &[Felt::ZERO]),
        })
    }

    #[inline]
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.ctx.q()
    }

    /// Values of `a` in the anchored point `(1, a)`: one per Frobenius orbit.
    pub fn a_values(&self) -> &[Felt] {
        &self.reps
    }

    #[inline]
    pub fn code(&self, x: Felt, y: Felt) -> Code {
        (x.0 << self.ctx.s() | y.0) as Code
    }

    #[inline]
    pub fn x(&self, p: Code) -> Felt {
        Felt((p >> self.ctx.s()) as u32)
    }

    #[inline]
    pub fn y(&self, p: Code) -> Felt {
        Felt(p as u32 & (self.ctx.q() - 1))
    }

    /// Direction of the line through two distinct affine points.
    #[inline]
    pub fn slope(&self, p: Code, r: Code) -> u8 {
        self.slope[(p ^ r) as usize]
    }

    /// Slope mask of `p` against `pts`, or `None` if `p` repeats a direction
    /// (i.e. is collinear with two of them) or coincides with one of them.
    #[inline]
    pub fn join(&self, pts: &[Code], p: Code) -> Option<Mask> {
        let mut bits: Mask = 0;
        for &r in pts {
            if r == p {
                return None;
            }
            let b = 1u128 << self.slope(p, r);
            if bits & b != 0 {
                return None;
            }
            bits |= b;
        }
        Some(bits)
    }

    /// Intersection of the line through `p` in direction `m1` with the line
    /// through `r` in direction `m2` (`m1 != m2`).
    pub fn intersect(&self, p: Code, m1: u8, r: Code, m2: u8) -> Code {
        let ctx = &self.ctx;
        let q = self.q();
        let intercept = |pt: Code, m: u8| ctx.add(self.y(pt), ctx.mul(Felt(m as u32), self.x(pt)));
        let (x, y) = if m1 as u32 == q {
            let x = self.x(p);
            (x, ctx.add(ctx.mul(Felt(m2 as u32), x), intercept(r, m2)))
        } else if m2 as u32 == q {
            let x = self.x(r);
            (x, ctx.add(ctx.mul(Felt(m1 as u32), x), intercept(p, m1)))
        } else {
            let b1 = intercept(p, m1);
            let b2 = intercept(r, m2);
            let x = ctx
                .div(ctx.add(b1, b2), Felt((m1 ^ m2) as u32))
                .expect("distinct directions");
            (x, ctx.add(ctx.mul(Felt(m1 as u32), x), b1))
        };
        self.code(x, y)
    }

    pub fn point(&self, p: Code) -> ProjPoint {
        ProjPoint::affine(self.x(p), self.y(p))
    }

    /// The point of `Z = 0` in direction `m`.
    pub fn direction_point(&self, m: u8) -> ProjPoint {
        if m as u32 == self.q() {
            ProjPoint::vertical()
        } else {
            ProjPoint::direction(&self.ctx, Felt(m as u32))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperfocus_core::plane;

    #[test]
    fn slopes_match_projective_meets() {
        let ctx = FieldCtx::with_default_modulus(4).unwrap();
        let sp = SearchSpace::new(&ctx).unwrap();
        let z = hyperfocus_core::ProjLine::infinity();
        for p in 0..256u16 {
            for r in (0..256u16).step_by(7) {
                if p == r {
                    continue;
                }
                let l = plane::line_through(&ctx, &sp.point(p), &sp.point(r)).unwrap();
                let f = plane::meet(&ctx, &l, &z).unwrap();
                assert_eq!(sp.direction_point(sp.slope(p, r)), f);
            }
        }
    }

    #[test]
    fn intersections_lie_on_both_lines() {
        let ctx = FieldCtx::with_default_modulus(3).unwrap();
        let sp = SearchSpace::new(&ctx).unwrap();
        for p in 0..64u16 {
            for r in 0..64u16 {
                for m1 in 0..=8u8 {
                    for m2 in 0..=8u8 {
                        if m1 == m2 {
                            continue;
                        }
                        let x = sp.intersect(p, m1, r, m2);
                        assert!(x == p || sp.slope(x, p) == m1);
                        assert!(x == r || sp.slope(x, r) == m2);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_large_fields() {
        let ctx = FieldCtx::with_default_modulus(7).unwrap();
        assert!(matches!(SearchSpace::new(&ctx), Err(SearchError::UnsupportedField(7))));
    }
}
