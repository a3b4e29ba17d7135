//! Core primitives for classifying hyperfocused arcs in PG(2, 2^s).

pub mod arcs;
pub mod canon;
pub mod conics;
pub mod construct;
pub mod field;
pub mod linalg;
pub mod plane;

pub use arcs::{Arc, ArcError, FocusKind, FocusSet, FocusVerdict, TranslationGroup};
pub use field::{Felt, FieldCtx, FieldError};
pub use plane::{PlaneError, ProjLine, ProjPoint, Projectivity};
