//! Exhaustive search for hyperfocused arcs in normal position.

pub mod candidates;
pub mod extend;
pub mod kernel;
pub mod record;
pub mod run;

use std::path::PathBuf;

use thiserror::Error;

pub use candidates::{enumerate_candidates8, prune8, Candidate8, FocusBounds, Prepared8, Rejection};
pub use extend::{extend_to_12, extend_to_14, Extension};
pub use kernel::SearchSpace;
pub use record::ArcRecord;
pub use run::{run_search, Counters, FoundArc, SearchConfig, SearchReport};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("search needs GF(2^s) with s <= {}, got s = {0}", kernel::MAX_SEARCH_DEGREE)]
    UnsupportedField(u32),
    #[error("target size {0} unsupported: need even k with 10 <= k <= min(16, q + 2)")]
    UnsupportedTarget(usize),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("checkpoint {0} was written for a different configuration")]
    ConfigMismatch(PathBuf),
    #[error("checkpoint {path} line {line}: {reason}")]
    BadCheckpoint { path: PathBuf, line: usize, reason: String },
}
