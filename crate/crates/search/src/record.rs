//! One JSON object per arc, one arc per line.

use hyperfocus_core::arcs::Arc;
use hyperfocus_core::field::parse_modulus;
use hyperfocus_core::{FieldCtx, PlaneError, ProjLine, ProjPoint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("malformed record: {0}")]
    Json(#[from] serde_json::Error),
    #[error("record is over q = {got} but the field has q = {want}")]
    WrongField { got: u32, want: u32 },
    #[error("record modulus {0:?} is not a polynomial bitmask")]
    BadModulus(String),
    #[error("bad point: {0}")]
    Point(#[from] PlaneError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcRecord {
    pub q: u32,
    pub modulus: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focus_line: Option<[u32; 3]>,
    pub points: Vec<[u32; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focus_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperconic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conic: Option<[u32; 6]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nucleus: Option<[u32; 3]>,
}

pub fn modulus_hex(ctx: &FieldCtx) -> String {
    format!("{:#x}", ctx.modulus())
}

impl ArcRecord {
    pub fn new(ctx: &FieldCtx, arc: &Arc, focus_line: Option<&ProjLine>) -> Self {
        ArcRecord {
            q: ctx.q(),
            modulus: modulus_hex(ctx),
            k: Some(arc.k()),
            focus_line: focus_line.map(|l| l.to_array()),
            points: arc.points().iter().map(|p| p.to_array()).collect(),
            verdict: None,
            focus_count: None,
            frobenius: None,
            canonical: None,
            hyperconic: None,
            conic: None,
            nucleus: None,
        }
    }

    pub fn parse(line: &str) -> Result<Self, RecordError> {
        Ok(serde_json::from_str(line)?)
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    /// The field the record claims, checked against its own `q`.
    pub fn field(&self) -> Result<FieldCtx, RecordError> {
        let m = parse_modulus(&self.modulus).ok_or_else(|| RecordError::BadModulus(self.modulus.clone()))?;
        let s = self.q.trailing_zeros();
        let ctx = FieldCtx::new(s, m).map_err(|_| RecordError::BadModulus(self.modulus.clone()))?;
        if ctx.q() != self.q {
            return Err(RecordError::WrongField {
                got: self.q,
                want: ctx.q(),
            });
        }
        Ok(ctx)
    }

    pub fn points(&self, ctx: &FieldCtx) -> Result<Vec<ProjPoint>, RecordError> {
        if self.q != ctx.q() {
            return Err(RecordError::WrongField {
                got: self.q,
                want: ctx.q(),
            });
        }
        Ok(self
            .points
            .iter()
            .map(|&v| ProjPoint::new(ctx, v))
            .collect::<Result<_, _>>()?)
    }

    pub fn focus_line(&self, ctx: &FieldCtx) -> Result<Option<ProjLine>, RecordError> {
        Ok(self.focus_line.map(|v| ProjLine::new(ctx, v)).transpose()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperfocus_core::Felt;

    #[test]
    fn round_trips_and_accepts_minimal_records() {
        let ctx = FieldCtx::with_default_modulus(5).unwrap();
        let pts = vec![
            ProjPoint::affine(Felt(0), Felt(0)),
            ProjPoint::affine(Felt(1), Felt(0)),
            ProjPoint::affine(Felt(0), Felt(1)),
            ProjPoint::affine(Felt(1), Felt(1)),
        ];
        let arc = Arc::new(&ctx, pts.clone()).unwrap();
        let rec = ArcRecord::new(&ctx, &arc, Some(&ProjLine::infinity()));
        let back = ArcRecord::parse(&rec.to_line()).unwrap();
        assert_eq!(back, rec);

        let minimal = ArcRecord::parse(r#"{"q":32,"modulus":"0x25","points":[[0,0,1],[1,0,1]]}"#).unwrap();
        assert_eq!(minimal.field().unwrap().modulus(), 0x25);
        assert_eq!(minimal.points(&ctx).unwrap().len(), 2);
        assert!(minimal.focus_line(&ctx).unwrap().is_none());
    }

    #[test]
    fn rejects_bad_input() {
        let ctx = FieldCtx::with_default_modulus(5).unwrap();
        assert!(ArcRecord::parse("{\"q\":32").is_err());
        let r = ArcRecord::parse(r#"{"q":32,"modulus":"0x25","points":[[0,0,0]]}"#).unwrap();
        assert!(matches!(r.points(&ctx), Err(RecordError::Point(_))));
        let r = ArcRecord::parse(r#"{"q":16,"modulus":"0x25","points":[]}"#).unwrap();
        assert!(r.field().is_err());
    }
}
