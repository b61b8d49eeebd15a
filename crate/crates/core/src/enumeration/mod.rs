//! Uniform hypergraphs up to isomorphism and the census that classifies
//! them.

mod canonical;
mod census;
mod generate;

use thiserror::Error;

pub use canonical::{canonical_form, CanonicalAntichain, CANON_MAX_N};
pub use census::{
    check_scale, classify, gap_census, gap_census_with_cache, run_census, run_census_with, CensusOptions,
    CensusReport, Category, ClassificationRecord, Classifier, GapReport,
};
pub use generate::{enumerate, enumerate_masks, enumerate_with, Strategy, ENUM_MAX_N, EXHAUSTIVE_MAX_EDGES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("canonical form is limited to n <= {CANON_MAX_N}, got n = {0}")]
    CanonTooLarge(usize),
    #[error("no {k}-uniform hypergraphs on {n} vertices")]
    InvalidShape { n: usize, k: usize },
    #[error("(n, k) = ({n}, {k}) is outside the supported scale")]
    OutOfScale { n: usize, k: usize },
    #[error("(n, k) = ({n}, {k}) is long-running; pass the long-running flag to run it")]
    NeedsLongRunning { n: usize, k: usize },
}
