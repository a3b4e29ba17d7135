//! Arcs, secants, tangents and focus sets, plus the translation-arc
//! constructions used as known hyperfocused examples.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::field::{Felt, FieldCtx};
use crate::plane::{self, PlaneError, ProjLine, ProjPoint, Projectivity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("point {0} appears twice")]
    DuplicatePoint(ProjPoint),
    #[error("three points are collinear: {0}, {1}, {2}")]
    NotAnArc(ProjPoint, ProjPoint, ProjPoint),
    #[error("point {0} belongs to the arc")]
    PointInArc(ProjPoint),
    #[error("line {line} meets the arc in {point}")]
    LineMeetsArc { line: ProjLine, point: ProjPoint },
    #[error("point {0} lies on a secant of the arc")]
    PointOnSecant(ProjPoint),
    #[error("exponent {i} is not coprime to {s}")]
    BadExponent { i: u32, s: u32 },
    #[error("point {0} is not affine")]
    NotAffine(ProjPoint),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// Fixed-size bitset over the `q + 1` points of a line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBitset {
    words: Vec<u64>,
}

impl LineBitset {
    pub fn new(bits: usize) -> Self {
        LineBitset {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    /// Sets bit `i`; returns whether it was already set.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        was
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(wi, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b))
    }
}

/// A set of points, no three collinear, kept sorted by dense point index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    points: Vec<ProjPoint>,
}

impl Arc {
    pub fn new(ctx: &FieldCtx, points: Vec<ProjPoint>) -> Result<Self, ArcError> {
        check_arc(ctx, &points)?;
        let mut points = points;
        points.sort_by_key(|p| p.index(ctx));
        Ok(Arc { points })
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.contains(p)
    }

    pub fn indices(&self, ctx: &FieldCtx) -> Vec<u32> {
        self.points.iter().map(|p| p.index(ctx)).collect()
    }

    pub fn image(&self, ctx: &FieldCtx, t: &Projectivity) -> Arc {
        let mut points: Vec<_> = self.points.iter().map(|p| t.apply(ctx, p)).collect();
        points.sort_by_key(|p| p.index(ctx));
        Arc { points }
    }

    pub fn frobenius_image(&self, ctx: &FieldCtx, i: u32) -> Arc {
        let mut points: Vec<_> = self
            .points
            .iter()
            .map(|p| plane::frobenius_collineation(ctx, p, i))
            .collect();
        points.sort_by_key(|p| p.index(ctx));
        Arc { points }
    }

    pub fn is_exterior(&self, ctx: &FieldCtx, l: &ProjLine) -> bool {
        self.points.iter().all(|p| !plane::incident(ctx, p, l))
    }
}

fn check_distinct(points: &[ProjPoint]) -> Result<(), ArcError> {
    let mut seen = std::collections::HashSet::with_capacity(points.len());
    for p in points {
        if !seen.insert(*p) {
            return Err(ArcError::DuplicatePoint(*p));
        }
    }
    Ok(())
}

fn check_arc(ctx: &FieldCtx, points: &[ProjPoint]) -> Result<(), ArcError> {
    check_distinct(points)?;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for k in j + 1..points.len() {
                if plane::collinear(ctx, &points[i], &points[j], &points[k]) {
                    return Err(ArcError::NotAnArc(points[i], points[j], points[k]));
                }
            }
        }
    }
    Ok(())
}

/// True iff no three of the (distinct) points are collinear.
pub fn is_arc(ctx: &FieldCtx, points: &[ProjPoint]) -> Result<bool, ArcError> {
    match check_arc(ctx, points) {
        Ok(()) => Ok(true),
        Err(ArcError::NotAnArc(..)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Whether `arc + p` is still an arc, testing only triples that contain `p`.
pub fn extends_arc(ctx: &FieldCtx, arc: &[ProjPoint], p: &ProjPoint) -> bool {
    if arc.contains(p) {
        return false;
    }
    for i in 0..arc.len() {
        for j in i + 1..arc.len() {
            if plane::collinear(ctx, &arc[i], &arc[j], p) {
                return false;
            }
        }
    }
    true
}

pub fn secants(ctx: &FieldCtx, arc: &Arc) -> Vec<ProjLine> {
    let pts = arc.points();
    let mut out = Vec::with_capacity(pts.len() * pts.len().saturating_sub(1) / 2);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            out.push(plane::line_through(ctx, &pts[i], &pts[j]).expect("distinct points"));
        }
    }
    out
}

/// Lines through `q` meeting the arc in exactly one point.
pub fn tangents_through(ctx: &FieldCtx, arc: &Arc, q: &ProjPoint) -> Result<Vec<ProjLine>, ArcError> {
    if arc.contains(q) {
        return Err(ArcError::PointInArc(*q));
    }
    let mut lines: Vec<(ProjLine, usize)> = Vec::new();
    for p in arc.points() {
        let l = plane::line_through(ctx, q, p)?;
        match lines.iter_mut().find(|(m, _)| *m == l) {
            Some((_, n)) => *n += 1,
            None => lines.push((l, 1)),
        }
    }
    Ok(lines.into_iter().filter(|&(_, n)| n == 1).map(|(l, _)| l).collect())
}

/// Intersections of the secants of an arc with an exterior line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FocusSet {
    pub line: ProjLine,
    pub points: Vec<ProjPoint>,
}

impl FocusSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.contains(p)
    }
}

fn check_exterior(ctx: &FieldCtx, arc: &Arc, l: &ProjLine) -> Result<(), ArcError> {
    match arc.points().iter().find(|p| plane::incident(ctx, p, l)) {
        Some(p) => Err(ArcError::LineMeetsArc { line: *l, point: *p }),
        None => Ok(()),
    }
}

/// Focus set as a bitset over positions along `l`.
pub fn focus_bits(ctx: &FieldCtx, arc: &Arc, l: &ProjLine) -> Result<LineBitset, ArcError> {
    check_exterior(ctx, arc, l)?;
    let mut bits = LineBitset::new(ctx.q() as usize + 1);
    for s in secants(ctx, arc) {
        let f = plane::meet(ctx, &s, l)?;
        bits.insert(l.position(ctx, &f) as usize);
    }
    Ok(bits)
}

pub fn focus_set(ctx: &FieldCtx, arc: &Arc, l: &ProjLine) -> Result<FocusSet, ArcError> {
    let bits = focus_bits(ctx, arc, l)?;
    let mut points: Vec<_> = bits.iter().map(|pos| l.point_at(ctx, pos as u32)).collect();
    points.sort_by_key(|p| p.index(ctx));
    Ok(FocusSet { line: *l, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FocusKind {
    Hyperfocused,
    SharplyFocused,
    Neither,
}

impl FocusKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FocusKind::Hyperfocused => "hyperfocused",
            FocusKind::SharplyFocused => "sharply_focused",
            FocusKind::Neither => "neither",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FocusVerdict {
    pub kind: FocusKind,
    pub focus_count: usize,
}

pub fn classify_focus(ctx: &FieldCtx, arc: &Arc, l: &ProjLine) -> Result<FocusVerdict, ArcError> {
    let n = focus_bits(ctx, arc, l)?.count();
    let k = arc.k();
    let kind = if n + 1 == k {
        FocusKind::Hyperfocused
    } else if n == k {
        FocusKind::SharplyFocused
    } else {
        FocusKind::Neither
    };
    Ok(FocusVerdict { kind, focus_count: n })
}

/// All exterior lines on which the arc is hyperfocused, in dense order.
pub fn hyperfocused_lines(ctx: &FieldCtx, arc: &Arc) -> Vec<ProjLine> {
    plane::all_lines(ctx)
        .filter(|l| arc.is_exterior(ctx, l))
        .filter(|l| {
            classify_focus(ctx, arc, l)
                .map(|v| v.kind == FocusKind::Hyperfocused)
                .unwrap_or(false)
        })
        .collect()
}

/// An additive subgroup of `F_q x F_q`, stored with its full element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationGroup {
    generators: Vec<(Felt, Felt)>,
    elements: Vec<(Felt, Felt)>,
}

impl TranslationGroup {
    pub fn generate(generators: &[(Felt, Felt)]) -> Self {
        let mut elements: BTreeSet<(Felt, Felt)> = BTreeSet::new();
        elements.insert((Felt::ZERO, Felt::ZERO));
        for &(g1, g2) in generators {
            let shifted: Vec<_> = elements
                .iter()
                .map(|&(a, b)| (Felt(a.0 ^ g1.0), Felt(b.0 ^ g2.0)))
                .collect();
            elements.extend(shifted);
        }
        TranslationGroup {
            generators: generators.to_vec(),
            elements: elements.into_iter().collect(),
        }
    }

    pub fn trivial() -> Self {
        Self::generate(&[])
    }

    /// `{(a, a^(2^i)) : a in H}` for the additive span `H` of `basis`.
    pub fn graph_of_frobenius(ctx: &FieldCtx, basis: &[Felt], i: u32) -> Self {
        let gens: Vec<_> = basis.iter().map(|&a| (a, ctx.frobenius(a, i))).collect();
        Self::generate(&gens)
    }

    pub fn with_generator(&self, a: (Felt, Felt)) -> Self {
        let mut gens = self.generators.clone();
        gens.push(a);
        Self::generate(&gens)
    }

    pub fn generators(&self) -> &[(Felt, Felt)] {
        &self.generators
    }

    pub fn elements(&self) -> &[(Felt, Felt)] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: &(Felt, Felt)) -> bool {
        self.elements.binary_search(a).is_ok()
    }
}

/// The orbit of an affine point under the translations of `group`.
pub fn translation_arc(ctx: &FieldCtx, group: &TranslationGroup, p: &ProjPoint) -> Result<Arc, ArcError> {
    if !p.is_affine() {
        return Err(ArcError::NotAffine(*p));
    }
    let points: Vec<_> = group
        .elements()
        .iter()
        .map(|&(a1, a2)| Projectivity::translation(a1, a2).apply(ctx, p))
        .collect();
    Arc::new(ctx, points)
}

/// `K_G ∪ φ_A(K_G)` for a translation `A` whose point lies on no secant of `K_G`.
pub fn double_translation_arc(
    ctx: &FieldCtx,
    arc: &Arc,
    group: &TranslationGroup,
    a: (Felt, Felt),
) -> Result<Arc, ArcError> {
    let a_bar = ProjPoint::affine(a.0, a.1);
    if arc.contains(&a_bar) {
        return Err(ArcError::PointOnSecant(a_bar));
    }
    if arc.k() >= 2 && secants(ctx, arc).iter().any(|s| plane::incident(ctx, &a_bar, s)) {
        return Err(ArcError::PointOnSecant(a_bar));
    }
    if group.contains(&a) {
        return Err(ArcError::PointOnSecant(a_bar));
    }
    let phi = Projectivity::translation(a.0, a.1);
    let mut points = arc.points().to_vec();
    points.extend(arc.points().iter().map(|p| phi.apply(ctx, p)));
    Arc::new(ctx, points)
}

/// `{(t, t^(2^i), 1)} ∪ {(1,0,0), (0,1,0)}`, a hyperoval when `gcd(i, s) = 1`.
pub fn translation_hyperoval(ctx: &FieldCtx, i: u32) -> Result<Arc, ArcError> {
    let s = ctx.s();
    if gcd(i, s) != 1 {
        return Err(ArcError::BadExponent { i, s });
    }
    let mut points: Vec<_> = ctx
        .elements()
        .map(|t| ProjPoint::affine(t, ctx.frobenius(t, i)))
        .collect();
    points.push(ProjPoint::direction(ctx, Felt::ZERO));
    points.push(ProjPoint::vertical());
    Arc::new(ctx, points)
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Every arc of even size in AG(2, q) that contains `(0,0), (1,0), (0,1)` and is
/// hyperfocused on `Z = 0`.
///
/// Up to the affine group fixing `Z = 0` this is every hyperfocused arc of size
/// at least 3 on that line. Intended for q <= 8.
pub fn hyperfocused_arcs_through_frame(ctx: &FieldCtx) -> Vec<Arc> {
    let l = ProjLine::infinity();
    let frame = [
        ProjPoint::affine(Felt(0), Felt(0)),
        ProjPoint::affine(Felt(1), Felt(0)),
        ProjPoint::affine(Felt(0), Felt(1)),
    ];
    let q = ctx.q();
    let mut pool: Vec<ProjPoint> = Vec::new();
    for x in 0..q {
        for y in 0..q {
            let p = ProjPoint::affine(Felt(x), Felt(y));
            if extends_arc(ctx, &frame, &p) {
                pool.push(p);
            }
        }
    }
    let mut out = Vec::new();
    let mut current = frame.to_vec();
    fn rec(
        ctx: &FieldCtx,
        l: &ProjLine,
        pool: &[ProjPoint],
        start: usize,
        current: &mut Vec<ProjPoint>,
        out: &mut Vec<Arc>,
    ) {
        if current.len().is_multiple_of(2) {
            let arc = Arc::new(ctx, current.clone()).expect("built incrementally");
            if classify_focus(ctx, &arc, l).expect("affine arc").kind == FocusKind::Hyperfocused {
                out.push(arc);
            }
        }
        for i in start..pool.len() {
            if extends_arc(ctx, current, &pool[i]) {
                current.push(pool[i]);
                rec(ctx, l, pool, i + 1, current, out);
                current.pop();
            }
        }
    }
    rec(ctx, &l, &pool, 0, &mut current, &mut out);
    out
}
