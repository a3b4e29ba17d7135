//! Points, lines, incidence and collineations of PG(2, q).
//!
//! Points and lines are homogeneous triples stored in canonical scaling: the
//! last nonzero coordinate is 1, so equality of triples is equality of points.

use std::fmt;

use thiserror::Error;

use crate::field::{Felt, FieldCtx};
use crate::linalg::{self, Mat3, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error("all coordinates are zero")]
    ZeroVector,
    #[error("coordinate {0} is outside the field")]
    OutOfRange(u32),
    #[error("the two points coincide")]
    SamePoint,
    #[error("the two lines coincide")]
    SameLine,
    #[error("three of the four frame elements are dependent")]
    DegenerateFrame,
    #[error("matrix is singular")]
    Singular,
}

fn normalize(ctx: &FieldCtx, v: Vec3) -> Option<Vec3> {
    let pivot = v.iter().rev().find(|x| !x.is_zero())?;
    let inv = ctx.inv(*pivot).ok()?;
    Some([ctx.mul(v[0], inv), ctx.mul(v[1], inv), ctx.mul(v[2], inv)])
}

/// A point of PG(2, q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec3,
}

/// A line `aX + bY + cZ = 0` of PG(2, q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjLine {
    coeffs: Vec3,
}

macro_rules! homogeneous {
    ($ty:ident, $field:ident) => {
        impl $ty {
            /// Scales `v` canonically; fails on the zero vector or out-of-range entries.
            pub fn new(ctx: &FieldCtx, v: [u32; 3]) -> Result<Self, PlaneError> {
                for &x in &v {
                    if x >= ctx.q() {
                        return Err(PlaneError::OutOfRange(x));
                    }
                }
                Self::from_felts(ctx, [Felt(v[0]), Felt(v[1]), Felt(v[2])])
            }

            pub fn from_felts(ctx: &FieldCtx, v: Vec3) -> Result<Self, PlaneError> {
                normalize(ctx, v)
                    .map(|$field| $ty { $field })
                    .ok_or(PlaneError::ZeroVector)
            }

            #[inline]
            pub fn vector(&self) -> &Vec3 {
                &self.$field
            }

            pub fn to_array(&self) -> [u32; 3] {
                [self.$field[0].0, self.$field[1].0, self.$field[2].0]
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let [a, b, c] = self.to_array();
                write!(f, "({a},{b},{c})")
            }
        }
    };
}

homogeneous!(ProjPoint, coords);
homogeneous!(ProjLine, coeffs);

impl ProjPoint {
    /// The affine point `(x, y, 1)`.
    #[inline]
    pub fn affine(x: Felt, y: Felt) -> Self {
        ProjPoint {
            coords: [x, y, Felt::ONE],
        }
    }

    pub fn is_affine(&self) -> bool {
        self.coords[2] == Felt::ONE
    }

    /// Dense index in `[0, q^2 + q]`: `(x,y,1) -> x*q + y`, the direction of
    /// slope `m` -> `q^2 + m`, and `(0,1,0) -> q^2 + q`.
    pub fn index(&self, ctx: &FieldCtx) -> u32 {
        let q = ctx.q();
        let [x, y, z] = self.coords;
        if z == Felt::ONE {
            x.0 * q + y.0
        } else if y.is_zero() {
            q * q
        } else if x.is_zero() {
            q * q + q
        } else {
            // (x, 1, 0) is the direction (1, 1/x, 0).
            q * q + ctx.inv(x).expect("nonzero").0
        }
    }

    pub fn from_index(ctx: &FieldCtx, idx: u32) -> Option<Self> {
        let q = ctx.q();
        if idx < q * q {
            return Some(Self::affine(Felt(idx / q), Felt(idx % q)));
        }
        let m = idx - q * q;
        if m > q {
            return None;
        }
        let v = if m == q {
            [Felt::ZERO, Felt::ONE, Felt::ZERO]
        } else {
            [Felt::ONE, Felt(m), Felt::ZERO]
        };
        Self::from_felts(ctx, v).ok()
    }

    /// The point at infinity in the direction of slope `m`, i.e. `(1, m, 0)`.
    pub fn direction(ctx: &FieldCtx, m: Felt) -> Self {
        Self::from_felts(ctx, [Felt::ONE, m, Felt::ZERO]).expect("nonzero")
    }

    /// `(0, 1, 0)`, the vertical direction.
    pub fn vertical() -> Self {
        ProjPoint {
            coords: [Felt::ZERO, Felt::ONE, Felt::ZERO],
        }
    }
}

impl ProjLine {
    /// The line `Z = 0`.
    pub fn infinity() -> Self {
        ProjLine {
            coeffs: [Felt::ZERO, Felt::ZERO, Felt::ONE],
        }
    }
}

pub fn incident(ctx: &FieldCtx, p: &ProjPoint, m: &ProjLine) -> bool {
    linalg::dot(ctx, p.vector(), m.vector()).is_zero()
}

pub fn line_through(ctx: &FieldCtx, p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine, PlaneError> {
    if p == q {
        return Err(PlaneError::SamePoint);
    }
    ProjLine::from_felts(ctx, linalg::cross(ctx, p.vector(), q.vector()))
}

pub fn meet(ctx: &FieldCtx, m: &ProjLine, n: &ProjLine) -> Result<ProjPoint, PlaneError> {
    if m == n {
        return Err(PlaneError::SameLine);
    }
    ProjPoint::from_felts(ctx, linalg::cross(ctx, m.vector(), n.vector()))
}

pub fn collinear(ctx: &FieldCtx, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    linalg::det_rows(ctx, a.vector(), b.vector(), c.vector()).is_zero()
}

fn pivot(v: &Vec3) -> usize {
    (0..3)
        .rev()
        .find(|&i| !v[i].is_zero())
        .expect("canonical vectors are nonzero")
}

impl ProjLine {
    /// Position of an incident point along this line, in `[0, q]`.
    ///
    /// Drops the coordinate at the line's pivot and reads the remaining pair as
    /// a point of PG(1, q): `(u, 1) -> u`, `(1, 0) -> q`.
    pub fn position(&self, ctx: &FieldCtx, p: &ProjPoint) -> u32 {
        let piv = pivot(&self.coeffs);
        let (i, j) = other_two(piv);
        let (u, w) = (p.coords[i], p.coords[j]);
        if w.is_zero() {
            ctx.q()
        } else {
            ctx.div(u, w).expect("nonzero").0
        }
    }

    /// Inverse of [`ProjLine::position`].
    pub fn point_at(&self, ctx: &FieldCtx, pos: u32) -> ProjPoint {
        let piv = pivot(&self.coeffs);
        let (i, j) = other_two(piv);
        let (u, w) = if pos == ctx.q() {
            (Felt::ONE, Felt::ZERO)
        } else {
            (Felt(pos), Felt::ONE)
        };
        let mut v = [Felt::ZERO; 3];
        v[i] = u;
        v[j] = w;
        // The pivot coefficient is 1, so the pivot coordinate is fixed by incidence.
        v[piv] = ctx.add(ctx.mul(self.coeffs[i], u), ctx.mul(self.coeffs[j], w));
        ProjPoint::from_felts(ctx, v).expect("nonzero")
    }

    pub fn points<'a>(&'a self, ctx: &'a FieldCtx) -> impl Iterator<Item = ProjPoint> + 'a {
        (0..=ctx.q()).map(move |pos| self.point_at(ctx, pos))
    }
}

fn other_two(piv: usize) -> (usize, usize) {
    match piv {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Every point of PG(2, q) in dense-index order.
pub fn all_points(ctx: &FieldCtx) -> impl Iterator<Item = ProjPoint> + '_ {
    let n = ctx.q() * ctx.q() + ctx.q() + 1;
    (0..n).map(move |i| ProjPoint::from_index(ctx, i).expect("in range"))
}

/// Every line of PG(2, q); lines are enumerated through the point indexing of
/// their coefficient vectors.
pub fn all_lines(ctx: &FieldCtx) -> impl Iterator<Item = ProjLine> + '_ {
    all_points(ctx).map(|p| ProjLine { coeffs: p.coords })
}

/// A collineation given by an invertible 3x3 matrix acting on column vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Projectivity {
    matrix: Mat3,
}

impl Projectivity {
    pub fn new(ctx: &FieldCtx, matrix: Mat3) -> Result<Self, PlaneError> {
        if linalg::det3(ctx, &matrix).is_zero() {
            return Err(PlaneError::Singular);
        }
        Ok(Projectivity { matrix })
    }

    pub fn identity() -> Self {
        Projectivity {
            matrix: linalg::identity3(),
        }
    }

    /// The translation `(X1, X2, X3) -> (X1 + a1 X3, X2 + a2 X3, X3)`.
    pub fn translation(a1: Felt, a2: Felt) -> Self {
        let mut m = linalg::identity3();
        m[0][2] = a1;
        m[1][2] = a2;
        Projectivity { matrix: m }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn apply(&self, ctx: &FieldCtx, p: &ProjPoint) -> ProjPoint {
        ProjPoint::from_felts(ctx, linalg::mat_vec(ctx, &self.matrix, p.vector()))
            .expect("invertible map sends nonzero vectors to nonzero vectors")
    }

    /// Image of a line: coefficients transform by the inverse transpose.
    pub fn apply_line(&self, ctx: &FieldCtx, m: &ProjLine) -> ProjLine {
        let inv_t = self.line_matrix(ctx);
        ProjLine::from_felts(ctx, linalg::mat_vec(ctx, &inv_t, m.vector())).expect("nonzero")
    }

    /// The matrix acting on line coordinates, `(M^-1)^T`.
    pub fn line_matrix(&self, ctx: &FieldCtx) -> Mat3 {
        let inv = linalg::inverse3(ctx, &self.matrix).expect("invertible");
        linalg::transpose(&inv)
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Self {
        Projectivity {
            matrix: linalg::inverse3(ctx, &self.matrix).expect("invertible"),
        }
    }

    /// `self` after `first`.
    pub fn compose(&self, ctx: &FieldCtx, first: &Projectivity) -> Self {
        Projectivity {
            matrix: linalg::mat_mul(ctx, &self.matrix, &first.matrix),
        }
    }

    /// Equality as projective maps (matrices up to a nonzero scalar).
    pub fn same_map(&self, ctx: &FieldCtx, other: &Projectivity) -> bool {
        let flat = |m: &Mat3| -> [Felt; 9] {
            let mut out = [Felt::ZERO; 9];
            for i in 0..9 {
                out[i] = m[i / 3][i % 3];
            }
            out
        };
        let (a, b) = (flat(&self.matrix), flat(&other.matrix));
        let Some(k) = (0..9).find(|&i| !a[i].is_zero()) else {
            return false;
        };
        if b[k].is_zero() {
            return false;
        }
        let ratio = ctx.div(b[k], a[k]).expect("nonzero");
        (0..9).all(|i| ctx.mul(a[i], ratio) == b[i])
    }
}

/// Matrix sending the standard frame `e1, e2, e3, (1,1,1)` to `v[0..4]`.
fn frame_basis(ctx: &FieldCtx, v: &[Vec3; 4]) -> Result<Mat3, PlaneError> {
    for skip in 0..4 {
        let rest: Vec<&Vec3> = (0..4).filter(|&i| i != skip).map(|i| &v[i]).collect();
        if linalg::det_rows(ctx, rest[0], rest[1], rest[2]).is_zero() {
            return Err(PlaneError::DegenerateFrame);
        }
    }
    let cols = linalg::transpose(&[v[0], v[1], v[2]]);
    let inv = linalg::inverse3(ctx, &cols).ok_or(PlaneError::DegenerateFrame)?;
    let lambda = linalg::mat_vec(ctx, &inv, &v[3]);
    let mut m = cols;
    for row in m.iter_mut() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = ctx.mul(*x, lambda[j]);
        }
    }
    Ok(m)
}

/// The matrix sending each `src[i]` to a multiple of `dst[i]`; both quadruples
/// must be in general position.
pub fn frame_map_vectors(ctx: &FieldCtx, src: &[Vec3; 4], dst: &[Vec3; 4]) -> Result<Projectivity, PlaneError> {
    let a = frame_basis(ctx, src)?;
    let b = frame_basis(ctx, dst)?;
    let a_inv = linalg::inverse3(ctx, &a).ok_or(PlaneError::DegenerateFrame)?;
    Ok(Projectivity {
        matrix: linalg::mat_mul(ctx, &b, &a_inv),
    })
}

/// The unique projectivity with `src[i] -> dst[i]`.
pub fn frame_map(ctx: &FieldCtx, src: &[ProjPoint; 4], dst: &[ProjPoint; 4]) -> Result<Projectivity, PlaneError> {
    let s = src.map(|p| p.coords);
    let d = dst.map(|p| p.coords);
    frame_map_vectors(ctx, &s, &d)
}

/// The projectivity whose action on lines sends `src[i] -> dst[i]`.
pub fn line_frame_map(ctx: &FieldCtx, src: &[ProjLine; 4], dst: &[ProjLine; 4]) -> Result<Projectivity, PlaneError> {
    let s = src.map(|m| m.coeffs);
    let d = dst.map(|m| m.coeffs);
    // A is the line action; the point action is (A^-1)^T.
    let a = frame_map_vectors(ctx, &s, &d)?;
    let inv = linalg::inverse3(ctx, &a.matrix).ok_or(PlaneError::DegenerateFrame)?;
    Ok(Projectivity {
        matrix: linalg::transpose(&inv),
    })
}

/// `(x, y, t) -> (x^(2^i), y^(2^i), t^(2^i))`.
pub fn frobenius_collineation(ctx: &FieldCtx, p: &ProjPoint, i: u32) -> ProjPoint {
    let v = p.coords.map(|x| ctx.frobenius(x, i));
    ProjPoint::from_felts(ctx, v).expect("Frobenius is injective")
}

pub fn frobenius_line(ctx: &FieldCtx, m: &ProjLine, i: u32) -> ProjLine {
    let v = m.coeffs.map(|x| ctx.frobenius(x, i));
    ProjLine::from_felts(ctx, v).expect("Frobenius is injective")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn gf32() -> FieldCtx {
        FieldCtx::new(5, 0x25).unwrap()
    }

    fn pt(ctx: &FieldCtx, v: [u32; 3]) -> ProjPoint {
        ProjPoint::new(ctx, v).unwrap()
    }

    fn ln(ctx: &FieldCtx, v: [u32; 3]) -> ProjLine {
        ProjLine::new(ctx, v).unwrap()
    }

    fn random_point(ctx: &FieldCtx, rng: &mut StdRng) -> ProjPoint {
        let n = ctx.q() * ctx.q() + ctx.q() + 1;
        ProjPoint::from_index(ctx, rng.gen_range(0..n)).unwrap()
    }

    fn random_projectivity(ctx: &FieldCtx, rng: &mut StdRng) -> Projectivity {
        loop {
            let mut m = [[Felt::ZERO; 3]; 3];
            for row in m.iter_mut() {
                for x in row.iter_mut() {
                    *x = Felt(rng.gen_range(0..ctx.q()));
                }
            }
            if let Ok(t) = Projectivity::new(ctx, m) {
                return t;
            }
        }
    }

    #[test]
    fn canonical_scaling() {
        let ctx = gf32();
        let p = pt(&ctx, [2, 4, 2]);
        assert_eq!(p.to_array(), [1, 2, 1]);
        assert_eq!(ProjPoint::new(&ctx, [0, 0, 0]), Err(PlaneError::ZeroVector));
        assert_eq!(ProjPoint::new(&ctx, [0, 32, 1]), Err(PlaneError::OutOfRange(32)));
    }

    #[test]
    fn dense_index_round_trips() {
        let ctx = FieldCtx::with_default_modulus(3).unwrap();
        let pts: Vec<_> = all_points(&ctx).collect();
        assert_eq!(pts.len(), 73);
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(p.index(&ctx), i as u32);
        }
        let ctx = gf32();
        assert_eq!(pt(&ctx, [1, 0, 0]).index(&ctx), 1024);
        assert_eq!(pt(&ctx, [0, 1, 0]).index(&ctx), 1056);
        assert_eq!(ProjPoint::direction(&ctx, Felt(7)).index(&ctx), 1024 + 7);
    }

    #[test]
    fn line_through_examples() {
        let ctx = gf32();
        let l = |a, b| line_through(&ctx, &pt(&ctx, a), &pt(&ctx, b)).unwrap().to_array();
        assert_eq!(l([0, 0, 1], [0, 1, 1]), [1, 0, 0]);
        assert_eq!(l([0, 0, 1], [1, 0, 1]), [0, 1, 0]);
        assert_eq!(l([0, 1, 1], [1, 0, 1]), [1, 1, 1]);
        let p = pt(&ctx, [3, 4, 1]);
        assert_eq!(line_through(&ctx, &p, &p), Err(PlaneError::SamePoint));
    }

    #[test]
    fn meet_examples() {
        let ctx = gf32();
        let m = |a, b| meet(&ctx, &ln(&ctx, a), &ln(&ctx, b)).unwrap().to_array();
        assert_eq!(m([0, 0, 1], [1, 0, 0]), [0, 1, 0]);
        assert_eq!(m([0, 0, 1], [0, 1, 0]), [1, 0, 0]);
        assert_eq!(m([1, 0, 0], [0, 1, 0]), [0, 0, 1]);
        let z = ProjLine::infinity();
        assert_eq!(meet(&ctx, &z, &z), Err(PlaneError::SameLine));
    }

    #[test]
    fn incidence_examples() {
        let ctx = gf32();
        assert!(incident(&ctx, &pt(&ctx, [0, 1, 0]), &ln(&ctx, [0, 0, 1])));
        assert!(!incident(&ctx, &pt(&ctx, [0, 0, 1]), &ln(&ctx, [0, 0, 1])));
        assert!(incident(&ctx, &pt(&ctx, [1, 1, 0]), &ln(&ctx, [1, 1, 1])));
    }

    #[test]
    fn translation_example() {
        let ctx = gf32();
        let t = Projectivity::translation(Felt(1), Felt(1));
        assert_eq!(t.apply(&ctx, &pt(&ctx, [0, 0, 1])).to_array(), [1, 1, 1]);
        let p = pt(&ctx, [5, 9, 1]);
        assert_eq!(Projectivity::identity().apply(&ctx, &p), p);
    }

    #[test]
    fn apply_preserves_incidence() {
        let ctx = gf32();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..500 {
            let t = random_projectivity(&ctx, &mut rng);
            let p = random_point(&ctx, &mut rng);
            let m = ProjLine::from_felts(&ctx, *random_point(&ctx, &mut rng).vector()).unwrap();
            assert_eq!(
                incident(&ctx, &p, &m),
                incident(&ctx, &t.apply(&ctx, &p), &t.apply_line(&ctx, &m))
            );
            // Lines through p stay through the image.
            let r = random_point(&ctx, &mut rng);
            if r != p {
                let l = line_through(&ctx, &p, &r).unwrap();
                assert!(incident(&ctx, &t.apply(&ctx, &p), &t.apply_line(&ctx, &l)));
            }
        }
    }

    #[test]
    fn frame_map_examples() {
        let ctx = gf32();
        let std = [
            pt(&ctx, [1, 0, 0]),
            pt(&ctx, [0, 1, 0]),
            pt(&ctx, [0, 0, 1]),
            pt(&ctx, [1, 1, 1]),
        ];
        let id = frame_map(&ctx, &std, &std).unwrap();
        assert!(id.same_map(&ctx, &Projectivity::identity()));

        let mut rng = StdRng::seed_from_u64(3);
        let mut done = 0;
        while done < 100 {
            let src = [0; 4].map(|_| random_point(&ctx, &mut rng));
            match frame_map(&ctx, &src, &std) {
                Ok(t) => {
                    for i in 0..4 {
                        assert_eq!(t.apply(&ctx, &src[i]), std[i]);
                    }
                    done += 1;
                }
                Err(e) => assert_eq!(e, PlaneError::DegenerateFrame),
            }
        }

        let collinear_src = [
            pt(&ctx, [0, 0, 1]),
            pt(&ctx, [0, 1, 1]),
            pt(&ctx, [0, 2, 1]),
            pt(&ctx, [1, 1, 1]),
        ];
        assert_eq!(frame_map(&ctx, &collinear_src, &std), Err(PlaneError::DegenerateFrame));
    }

    #[test]
    fn frame_maps_compose() {
        let ctx = gf32();
        let mut rng = StdRng::seed_from_u64(5);
        let mut frame = || loop {
            let f = [0; 4].map(|_| random_point(&ctx, &mut rng));
            if frame_map(&ctx, &f, &f).is_ok() {
                return f;
            }
        };
        for _ in 0..50 {
            let (a, b, c) = (frame(), frame(), frame());
            let ab = frame_map(&ctx, &a, &b).unwrap();
            let bc = frame_map(&ctx, &b, &c).unwrap();
            let ac = frame_map(&ctx, &a, &c).unwrap();
            assert!(bc.compose(&ctx, &ab).same_map(&ctx, &ac));
        }
    }

    #[test]
    fn line_frame_map_sends_lines() {
        let ctx = gf32();
        let src = [
            ln(&ctx, [1, 3, 1]),
            ln(&ctx, [5, 0, 1]),
            ln(&ctx, [7, 2, 1]),
            ln(&ctx, [0, 0, 1]),
        ];
        let dst = [
            ln(&ctx, [1, 0, 0]),
            ln(&ctx, [0, 1, 0]),
            ln(&ctx, [1, 1, 1]),
            ln(&ctx, [0, 0, 1]),
        ];
        let t = line_frame_map(&ctx, &src, &dst).unwrap();
        for i in 0..4 {
            assert_eq!(t.apply_line(&ctx, &src[i]), dst[i]);
        }
    }

    #[test]
    fn frobenius_fixes_reference_points() {
        let ctx = gf32();
        for v in [[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 0, 0], [0, 1, 0], [1, 1, 0]] {
            let p = pt(&ctx, v);
            for i in 0..10 {
                assert_eq!(frobenius_collineation(&ctx, &p, i), p);
            }
        }
        let p = pt(&ctx, [1, 2, 1]);
        assert_eq!(frobenius_collineation(&ctx, &p, 1).to_array(), [1, 4, 1]);
    }

    #[test]
    fn frobenius_preserves_collinearity() {
        let ctx = gf32();
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..2000 {
            let [a, b, c] = [0; 3].map(|_| random_point(&ctx, &mut rng));
            let i = rng.gen_range(0..5);
            let f = |p: &ProjPoint| frobenius_collineation(&ctx, p, i);
            assert_eq!(collinear(&ctx, &a, &b, &c), collinear(&ctx, &f(&a), &f(&b), &f(&c)));
        }
    }

    #[test]
    fn duality_of_join_and_meet() {
        let ctx = gf32();
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..500 {
            let [p, q, r] = [0; 3].map(|_| random_point(&ctx, &mut rng));
            if collinear(&ctx, &p, &q, &r) {
                continue;
            }
            let pq = line_through(&ctx, &p, &q).unwrap();
            let pr = line_through(&ctx, &p, &r).unwrap();
            assert_eq!(meet(&ctx, &pq, &pr).unwrap(), p);
        }
    }

    #[test]
    fn incidence_counts_small_planes() {
        for s in 2..=3 {
            let ctx = FieldCtx::with_default_modulus(s).unwrap();
            let q = ctx.q() as usize;
            let pts: Vec<_> = all_points(&ctx).collect();
            let lines: Vec<_> = all_lines(&ctx).collect();
            assert_eq!(lines.len(), q * q + q + 1);
            for l in &lines {
                let on: Vec<_> = pts.iter().filter(|p| incident(&ctx, p, l)).collect();
                assert_eq!(on.len(), q + 1);
                let mut via_positions: Vec<_> = l.points(&ctx).collect();
                via_positions.sort_by_key(|p| p.index(&ctx));
                let mut direct: Vec<_> = on.into_iter().copied().collect();
                direct.sort_by_key(|p| p.index(&ctx));
                assert_eq!(via_positions, direct);
                for p in &direct {
                    assert_eq!(l.point_at(&ctx, l.position(&ctx, p)), *p);
                }
            }
            for p in &pts {
                assert_eq!(lines.iter().filter(|l| incident(&ctx, p, l)).count(), q + 1);
            }
        }
    }
}
