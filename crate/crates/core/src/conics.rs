//! Conics through five points, nuclei in characteristic 2, and hyperconic
//! containment of arcs.

use thiserror::Error;

use crate::arcs::Arc;
use crate::field::{Felt, FieldCtx};
use crate::linalg;
use crate::plane::{self, ProjPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConicError {
    #[error("input points are repeated or three are collinear")]
    DegenerateInput,
    #[error("more than one conic passes through the points")]
    AmbiguousConic,
    #[error("conic has no nucleus (d = e = f = 0)")]
    DegenerateConic,
    #[error("need at least 6 points, got {0}")]
    TooFewPoints(usize),
}

/// Coefficients of `aX² + bY² + cZ² + dXY + eXZ + fYZ`, first nonzero one = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConicCoeffs(pub [Felt; 6]);

impl ConicCoeffs {
    pub fn new(ctx: &FieldCtx, c: [Felt; 6]) -> Option<Self> {
        let lead = c.iter().find(|x| !x.is_zero())?;
        let inv = ctx.inv(*lead).ok()?;
        Some(ConicCoeffs(c.map(|x| ctx.mul(x, inv))))
    }

    pub fn to_array(&self) -> [u32; 6] {
        self.0.map(|x| x.0)
    }

    pub fn is_nondegenerate(&self) -> bool {
        let [_, _, _, d, e, f] = self.0;
        !(d.is_zero() && e.is_zero() && f.is_zero())
    }
}

fn monomials(ctx: &FieldCtx, p: &ProjPoint) -> [Felt; 6] {
    let [x, y, z] = *p.vector();
    [
        ctx.mul(x, x),
        ctx.mul(y, y),
        ctx.mul(z, z),
        ctx.mul(x, y),
        ctx.mul(x, z),
        ctx.mul(y, z),
    ]
}

pub fn evaluate(ctx: &FieldCtx, c: &ConicCoeffs, p: &ProjPoint) -> Felt {
    monomials(ctx, p)
        .iter()
        .zip(c.0.iter())
        .fold(Felt::ZERO, |acc, (m, k)| ctx.add(acc, ctx.mul(*m, *k)))
}

pub fn on_conic(ctx: &FieldCtx, c: &ConicCoeffs, p: &ProjPoint) -> bool {
    evaluate(ctx, c, p).is_zero()
}

/// The unique conic through five points in general position.
pub fn conic_through_5(ctx: &FieldCtx, pts: &[ProjPoint; 5]) -> Result<ConicCoeffs, ConicError> {
    for i in 0..5 {
        for j in i + 1..5 {
            if pts[i] == pts[j] {
                return Err(ConicError::DegenerateInput);
            }
            for k in j + 1..5 {
                if plane::collinear(ctx, &pts[i], &pts[j], &pts[k]) {
                    return Err(ConicError::DegenerateInput);
                }
            }
        }
    }
    let rows: Vec<Vec<Felt>> = pts.iter().map(|p| monomials(ctx, p).to_vec()).collect();
    let ns = linalg::null_space(ctx, &rows, 6);
    match ns.as_slice() {
        [v] => {
            let c: [Felt; 6] = v.as_slice().try_into().expect("six coefficients");
            Ok(ConicCoeffs::new(ctx, c).expect("null vector is nonzero"))
        }
        [] => Err(ConicError::DegenerateInput),
        _ => Err(ConicError::AmbiguousConic),
    }
}

/// Common point of all tangents: the gradient `(dY+eZ, dX+fZ, eX+fY)` vanishes
/// exactly at `(f, e, d)` in characteristic 2.
pub fn nucleus(ctx: &FieldCtx, c: &ConicCoeffs) -> Result<ProjPoint, ConicError> {
    let [_, _, _, d, e, f] = c.0;
    ProjPoint::from_felts(ctx, [f, e, d]).map_err(|_| ConicError::DegenerateConic)
}

/// Outcome of a hyperconic containment test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperconicVerdict {
    pub contained: bool,
    /// The conic whose hyperconic contains the arc, when `contained`.
    pub conic: Option<ConicCoeffs>,
    pub nucleus: Option<ProjPoint>,
    /// Positions (in arc order) of the five points the conic was fitted to.
    pub subset: Option<[usize; 5]>,
    /// Whether the nucleus itself is a point of the arc.
    pub nucleus_in_arc: bool,
}

impl HyperconicVerdict {
    fn negative() -> Self {
        HyperconicVerdict {
            contained: false,
            conic: None,
            nucleus: None,
            subset: None,
            nucleus_in_arc: false,
        }
    }
}

/// Tests one quintuple: the fitted conic contains every point, or all but one
/// and that one is the nucleus.
fn try_quintuple(
    ctx: &FieldCtx,
    pts: &[ProjPoint],
    subset: [usize; 5],
) -> Result<Option<HyperconicVerdict>, ConicError> {
    let five = subset.map(|i| pts[i]);
    let c = conic_through_5(ctx, &five)?;
    let off: Vec<&ProjPoint> = pts.iter().filter(|p| !on_conic(ctx, &c, p)).collect();
    let n = nucleus(ctx, &c).ok();
    let accept = match off.as_slice() {
        [] => true,
        [p] => n.as_ref() == Some(*p),
        _ => false,
    };
    if !accept {
        return Ok(None);
    }
    Ok(Some(HyperconicVerdict {
        contained: true,
        conic: Some(c),
        nucleus: n,
        subset: Some(subset),
        nucleus_in_arc: !off.is_empty(),
    }))
}

/// Whether the arc lies in a conic plus its nucleus.
///
/// Fits the conic to the first five points; if that fails, retries with the
/// first six points minus one of the first five, so that some attempt avoids
/// the nucleus whenever the arc lies in a hyperconic.
pub fn hyperconic_contains(ctx: &FieldCtx, arc: &Arc) -> Result<HyperconicVerdict, ConicError> {
    let pts = arc.points();
    if pts.len() < 6 {
        return Err(ConicError::TooFewPoints(pts.len()));
    }
    let mut attempts = vec![[0, 1, 2, 3, 4]];
    for skip in 0..5 {
        let mut s = [0usize; 5];
        let mut n = 0;
        for i in 0..6 {
            if i != skip {
                s[n] = i;
                n += 1;
            }
        }
        attempts.push(s);
    }
    for subset in attempts {
        if let Some(v) = try_quintuple(ctx, pts, subset)? {
            return Ok(v);
        }
    }
    Ok(HyperconicVerdict::negative())
}

/// Brute-force containment check over every 5-subset of the arc.
pub fn hyperconic_contains_exhaustive(ctx: &FieldCtx, arc: &Arc) -> Result<bool, ConicError> {
    let pts = arc.points();
    if pts.len() < 6 {
        return Err(ConicError::TooFewPoints(pts.len()));
    }
    let n = pts.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for e in d + 1..n {
                        if try_quintuple(ctx, pts, [a, b, c, d, e])?.is_some() {
                            return Ok(true);
                        }
                    }
                }
            }
        }
    }
    Ok(false)
}
