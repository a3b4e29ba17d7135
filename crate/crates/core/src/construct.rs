//! Named constructions of known hyperfocused arcs, selectable at runtime.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arcs::{self, Arc, ArcError, TranslationGroup};
use crate::field::{Felt, FieldCtx, FieldError};
use crate::plane::{self, ProjLine, ProjPoint};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("unknown construction {0:?}")]
    Unknown(String),
    #[error("missing parameter --{0}")]
    Missing(&'static str),
    #[error("invalid parameter --{name}: {reason}")]
    Invalid { name: &'static str, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Arc(#[from] ArcError),
}

fn invalid(name: &'static str, reason: impl Into<String>) -> ConstructError {
    ConstructError::Invalid {
        name,
        reason: reason.into(),
    }
}

/// String-valued parameters, as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct Params(BTreeMap<String, String>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn u32(&self, key: &'static str) -> Result<Option<u32>, ConstructError> {
        self.get(key)
            .map(|v| v.trim().parse::<u32>().map_err(|e| invalid(key, e.to_string())))
            .transpose()
    }

    /// Parses `(a,b);(c,d);...` into element pairs.
    pub fn pairs(&self, ctx: &FieldCtx, key: &'static str) -> Result<Option<Vec<(Felt, Felt)>>, ConstructError> {
        let Some(text) = self.get(key) else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let inner = item
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| invalid(key, format!("expected (x,y), got {item:?}")))?;
            let parts: Vec<&str> = inner.split(',').collect();
            let [a, b] = parts.as_slice() else {
                return Err(invalid(key, format!("expected two coordinates in {item:?}")));
            };
            out.push((ctx.parse_element(a)?, ctx.parse_element(b)?));
        }
        Ok(Some(out))
    }

    /// Parses `a;b;c` into elements.
    pub fn elements(&self, ctx: &FieldCtx, key: &'static str) -> Result<Option<Vec<Felt>>, ConstructError> {
        let Some(text) = self.get(key) else {
            return Ok(None);
        };
        text.split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| ctx.parse_element(s).map_err(Into::into))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

/// An arc together with a line it is claimed to be hyperfocused on.
#[derive(Debug, Clone)]
pub struct Constructed {
    pub arc: Arc,
    pub focus_line: ProjLine,
}

pub trait Construction: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn build(&self, ctx: &FieldCtx, params: &Params) -> Result<Constructed, ConstructError>;
}

pub struct Registry {
    entries: Vec<Box<dyn Construction>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry { entries: Vec::new() }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Translation));
        r.register(Box::new(Doubling));
        r.register(Box::new(Hyperoval));
        r.register(Box::new(ConicSubgroup));
        r.register(Box::new(SubplaneHyperoval));
        r
    }

    /// Adds a construction, replacing any existing one with the same name.
    pub fn register(&mut self, c: Box<dyn Construction>) {
        self.entries.retain(|e| e.name() != c.name());
        self.entries.push(c);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Construction> {
        self.entries.iter().find(|e| e.name() == name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn build(&self, name: &str, ctx: &FieldCtx, params: &Params) -> Result<Constructed, ConstructError> {
        self.get(name)
            .ok_or_else(|| ConstructError::Unknown(name.to_string()))?
            .build(ctx, params)
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

fn start_point(ctx: &FieldCtx, params: &Params) -> Result<ProjPoint, ConstructError> {
    match params.pairs(ctx, "point")?.as_deref() {
        None => Ok(ProjPoint::affine(Felt::ZERO, Felt::ZERO)),
        Some([(x, y)]) => Ok(ProjPoint::affine(*x, *y)),
        Some(_) => Err(invalid("point", "expected a single (x,y)")),
    }
}

fn group(ctx: &FieldCtx, params: &Params) -> Result<TranslationGroup, ConstructError> {
    let gens = params.pairs(ctx, "gens")?.ok_or(ConstructError::Missing("gens"))?;
    Ok(TranslationGroup::generate(&gens))
}

/// Orbit of a point under an additive group of translations.
struct Translation;

impl Construction for Translation {
    fn name(&self) -> &'static str {
        "translation"
    }
    fn describe(&self) -> &'static str {
        "orbit of --point (default (0,0)) under the translations --gens \"(a,b);(c,d)\""
    }
    fn build(&self, ctx: &FieldCtx, params: &Params) -> Result<Constructed, ConstructError> {
        let g = group(ctx, params)?;
        let arc = arcs::translation_arc(ctx, &g, &start_point(ctx, params)?)?;
        Ok(Constructed {
            arc,
            focus_line: ProjLine::infinity(),
        })
    }
}

/// Translation arc joined with its image under one more translation.
struct Doubling;

impl Construction for Doubling {
    fn name(&self) -> &'static str {
        "double"
    }
    fn describe(&self) -> &'static str {
        "translation arc of --gens doubled by --a \"(x,y)\" (default: first point off every secant)"
    }
    fn build(&self, ctx: &FieldCtx, params: &Params) -> Result<Constructed, ConstructError> {
        let g = group(ctx, params)?;
        let base = arcs::translation_arc(ctx, &g, &start_point(ctx, params)?)?;
        let a = match params.pairs(ctx, "a")?.as_deref() {
            Some([a]) => *a,
            Some(_) => return Err(invalid("a", "expected a single (x,y)")),
            None => {
                let secants = arcs::secants(ctx, &base);
                let found = ctx
                    .elements()
                    .flat_map(|x| ctx.elements().map(move |y| (x, y)))
                    .find(|&(x, y)| {
                        let p = ProjPoint::affine(x, y);
                        !g.contains(&(x, y))
                            && !base.contains(&p)
                            && secants.iter().all(|s| !plane::incident(ctx, &p, s))
                    });
                found.ok_or_else(|| invalid("a", "no affine point avoids every secant"))?
            }
        };
        let arc = arcs::double_translation_arc(ctx, &base, &g, a)?;
        Ok(Constructed {
            arc,
            focus_line: ProjLine::infinity(),
        })
    }
}

/// `{(t, t^(2^i), 1)} ∪ {(1,0,0), (0,1,0)}`.
struct Hyperoval;

impl Construction for Hyperoval {
    fn name(&self) -> &'static str {
        "hyperoval"
    }
    fn describe(&self) -> &'static str {
        "translation hyperoval with exponent 2^i, --i coprime to s"
    }
    fn build(&self, ctx: &FieldCtx, params: &Params) -> Result<Constructed, ConstructError> {
        let i = params.u32("i")?.ok_or(ConstructError::Missing("i"))?;
        let arc = arcs::translation_hyperoval(ctx, i).map_err(|e| match e {
            ArcError::BadExponent { .. } => invalid("i", e.to_string()),
            other => other.into(),
        })?;
        let focus_line = plane::all_lines(ctx)
            .find(|l| arc.is_exterior(ctx, l))
            .expect("a hyperoval has exterior lines");
        Ok(Constructed { arc, focus_line })
    }
}

fn subgroup_basis(ctx: &FieldCtx, params: &Params) -> Result<Vec<Felt>, ConstructError> {
    if let Some(b) = params.elements(ctx, "basis")? {
        return Ok(b);
    }
    let d = params.u32("d")?.ok_or(ConstructError::Missing("d"))?;
    if d == 0 || d > ctx.s() {
        return Err(invalid("d", format!("need 1 <= d <= {}", ctx.s())));
    }
    Ok((0..d).map(|i| ctx.exp(i)).collect())
}

/// Points `(t, t^2, 1)` for `t` in an additive subgroup; hyperfocused on the
/// tangent `Z = 0` at `(0,1,0)`.
struct ConicSubgroup;

impl Construction for ConicSubgroup {
    fn name(&self) -> &'static str {
        "conic-subgroup"
    }
    fn describe(&self) -> &'static str {
        "points (t, t^2) for t in span{1, w, ..., w^(d-1)} (--d) or span of --basis \"a;b\""
    }
    fn build(&self, ctx: &FieldCtx, params: &Params) -> Result<Constructed, ConstructError> {
        let basis = subgroup_basis(ctx, params)?;
        let g = TranslationGroup::graph_of_frobenius(ctx, &basis, 1);
        let arc = arcs::translation_arc(ctx, &g, &ProjPoint::affine(Felt::ZERO, Felt::ZERO))?;
        Ok(Constructed {
            arc,
            focus_line: ProjLine::infinity(),
        })
    }
}

/// The hyperconic of the subplane PG(2, 2^d), with a subplane line exterior to it.
struct SubplaneHyperoval;

impl Construction for SubplaneHyperoval {
    fn name(&self) -> &'static str {
        "subplane-hyperoval"
    }
    fn describe(&self) -> &'static str {
        "hyperconic of the subplane PG(2, 2^d), --d dividing s, size 2^d + 2"
    }
    fn build(&self, ctx: &FieldCtx, params: &Params) -> Result<Constructed, ConstructError> {
        let d = params.u32("d")?.ok_or(ConstructError::Missing("d"))?;
        if d == 0 || !ctx.s().is_multiple_of(d) {
            return Err(invalid("d", format!("{d} does not divide {}", ctx.s())));
        }
        let sub: Vec<Felt> = ctx.elements().filter(|&x| ctx.frobenius(x, d) == x).collect();
        let mut points: Vec<_> = sub.iter().map(|&t| ProjPoint::affine(t, ctx.square(t))).collect();
        points.push(ProjPoint::direction(ctx, Felt::ZERO));
        points.push(ProjPoint::vertical());
        let arc = Arc::new(ctx, points)?;
        let focus_line = plane::all_lines(ctx)
            .filter(|l| l.vector().iter().all(|c| sub.contains(c)))
            .find(|l| arc.is_exterior(ctx, l))
            .ok_or_else(|| invalid("d", "no exterior subplane line"))?;
        Ok(Constructed { arc, focus_line })
    }
}
