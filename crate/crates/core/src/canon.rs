//! Normalized frames, Frobenius orbit representatives and canonical forms of
//! arcs with respect to a focus line.
//!
//! The normalized position sends the focus line to `Z = 0` and three arc points
//! `P1, P2, P3` to `(1,0,1), (0,1,1), (0,0,1)` by mapping the lines
//! `P2P3 -> X = 0`, `P1P3 -> Y = 0`, `P1P2 -> X + Y + Z = 0`.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arcs::{self, Arc, ArcError};
use crate::field::{Felt, FieldCtx};
use crate::plane::{self, PlaneError, ProjLine, ProjPoint, Projectivity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("point {0} of the triple is not in the arc")]
    NotInArc(ProjPoint),
    #[error("the triple repeats a point")]
    RepeatedPoint,
    #[error("arc has fewer than three points")]
    TooSmall,
    #[error(transparent)]
    Arc(#[from] ArcError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// A projectivity together with the normalized image of an arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedFrame {
    pub map: Projectivity,
    pub image: Arc,
}

fn line(ctx: &FieldCtx, v: [u32; 3]) -> ProjLine {
    ProjLine::new(ctx, v).expect("constant line")
}

fn point(ctx: &FieldCtx, v: [u32; 3]) -> ProjPoint {
    ProjPoint::new(ctx, v).expect("constant point")
}

/// Checks the normalized-position conditions: `Z = 0` exterior, the three
/// reference points in the arc, and `(0,1,0), (1,1,0), (1,0,0)` in its focus set.
pub fn satisfies_normal_position(ctx: &FieldCtx, arc: &Arc) -> bool {
    let z = ProjLine::infinity();
    if !arc.is_exterior(ctx, &z) {
        return false;
    }
    let refs = [[0, 0, 1], [0, 1, 1], [1, 0, 1]];
    if !refs.iter().all(|&v| arc.contains(&point(ctx, v))) {
        return false;
    }
    let Ok(focus) = arcs::focus_set(ctx, arc, &z) else {
        return false;
    };
    [[0, 1, 0], [1, 1, 0], [1, 0, 0]]
        .iter()
        .all(|&v| focus.contains(&point(ctx, v)))
}

/// The projectivity putting `arc` into normalized position with respect to `l`
/// and the ordered triple `(P1, P2, P3)`.
pub fn normalize_frame(
    ctx: &FieldCtx,
    arc: &Arc,
    l: &ProjLine,
    triple: [ProjPoint; 3],
) -> Result<NormalizedFrame, CanonError> {
    for p in &triple {
        if !arc.contains(p) {
            return Err(CanonError::NotInArc(*p));
        }
    }
    let [p1, p2, p3] = triple;
    if p1 == p2 || p1 == p3 || p2 == p3 {
        return Err(CanonError::RepeatedPoint);
    }
    if let Some(p) = arc.points().iter().find(|p| plane::incident(ctx, p, l)) {
        return Err(ArcError::LineMeetsArc { line: *l, point: *p }.into());
    }
    let map = frame_projectivity(ctx, l, &triple)?;
    let image = arc.image(ctx, &map);
    debug_assert!(satisfies_normal_position(ctx, &image));
    Ok(NormalizedFrame { map, image })
}

fn frame_projectivity(ctx: &FieldCtx, l: &ProjLine, triple: &[ProjPoint; 3]) -> Result<Projectivity, PlaneError> {
    let [p1, p2, p3] = triple;
    let l1 = plane::line_through(ctx, p2, p3)?;
    let l2 = plane::line_through(ctx, p1, p3)?;
    let l3 = plane::line_through(ctx, p1, p2)?;
    let dst = [
        line(ctx, [1, 0, 0]),
        line(ctx, [0, 1, 0]),
        line(ctx, [1, 1, 1]),
        line(ctx, [0, 0, 1]),
    ];
    plane::line_frame_map(ctx, &[l1, l2, l3, *l], &dst)
}

/// One representative per orbit of `x -> x^2` on `F_q \ exclude`: the member
/// with the smallest discrete log, listed by discrete log (zero first).
pub fn frobenius_orbit_reps(ctx: &FieldCtx, exclude: &[Felt]) -> Vec<Felt> {
    let mut reps: Vec<Felt> = Vec::new();
    let mut covered = vec![false; ctx.q() as usize];
    for &e in exclude {
        covered[e.0 as usize] = true;
    }
    let domain = |a: Felt| !exclude.contains(&a);
    // Visit zero, then ω^0, ω^1, ... so the first unvisited orbit member has minimal log.
    let order = std::iter::once(Felt::ZERO).chain((0..ctx.q() - 1).map(|i| ctx.exp(i)));
    for a in order {
        if covered[a.0 as usize] {
            continue;
        }
        reps.push(a);
        for i in 0..ctx.s() {
            let b = ctx.frobenius(a, i);
            if domain(b) {
                covered[b.0 as usize] = true;
            }
        }
    }
    reps
}

/// The Frobenius orbit of `a`.
pub fn frobenius_orbit(ctx: &FieldCtx, a: Felt) -> Vec<Felt> {
    let mut orbit: Vec<Felt> = (0..ctx.s()).map(|i| ctx.frobenius(a, i)).collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

fn serialize(indices: &[u32]) -> Vec<u8> {
    indices.iter().flat_map(|i| i.to_be_bytes()).collect()
}

/// Lexicographically least serialization of the arc over all normalizations by
/// ordered triples and all Frobenius powers.
pub fn canonical_form(ctx: &FieldCtx, arc: &Arc, l: &ProjLine) -> Result<Vec<u8>, CanonError> {
    let pts = arc.points();
    if pts.len() < 3 {
        return Err(CanonError::TooSmall);
    }
    if let Some(p) = pts.iter().find(|p| plane::incident(ctx, p, l)) {
        return Err(ArcError::LineMeetsArc { line: *l, point: *p }.into());
    }
    let mut best: Option<Vec<u32>> = None;
    let mut scratch = Vec::with_capacity(pts.len());
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            for k in 0..pts.len() {
                if i == j || j == k || i == k {
                    continue;
                }
                let t = frame_projectivity(ctx, l, &[pts[i], pts[j], pts[k]])?;
                let image: Vec<ProjPoint> = pts.iter().map(|p| t.apply(ctx, p)).collect();
                for f in 0..ctx.s() {
                    scratch.clear();
                    scratch.extend(
                        image
                            .iter()
                            .map(|p| plane::frobenius_collineation(ctx, p, f).index(ctx)),
                    );
                    scratch.sort_unstable();
                    if best.as_ref().is_none_or(|b| scratch < *b) {
                        best = Some(scratch.clone());
                    }
                }
            }
        }
    }
    Ok(serialize(&best.expect("at least one triple")))
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Lowercase hex SHA-256 of [`canonical_form`].
pub fn canonical_digest(ctx: &FieldCtx, arc: &Arc, l: &ProjLine) -> Result<String, CanonError> {
    Ok(digest(&canonical_form(ctx, arc, l)?))
}

/// Decodes a canonical form back into the arc it serializes.
pub fn arc_from_canonical(ctx: &FieldCtx, bytes: &[u8]) -> Option<Arc> {
    let pts: Option<Vec<ProjPoint>> = bytes
        .chunks_exact(4)
        .map(|c| ProjPoint::from_index(ctx, u32::from_be_bytes(c.try_into().unwrap())))
        .collect();
    Arc::new(ctx, pts?).ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub digest: String,
    /// Positions in the input list, ascending.
    pub members: Vec<usize>,
}

/// Groups arcs (all on the focus line `l`) by canonical digest, ordered by digest.
pub fn equivalence_classes(ctx: &FieldCtx, arcs: &[Arc], l: &ProjLine) -> Result<Vec<EquivalenceClass>, CanonError> {
    let mut classes: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, arc) in arcs.iter().enumerate() {
        classes.entry(canonical_digest(ctx, arc, l)?).or_default().push(i);
    }
    Ok(classes
        .into_iter()
        .map(|(digest, members)| EquivalenceClass { digest, members })
        .collect())
}
