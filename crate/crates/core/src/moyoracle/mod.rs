//! Graded dimensions of `H(𝓒_N(Γ), d_mf)` for closed resolved braids by MOY
//! rewriting down to concentric circles, independent of the linear algebra
//! in [`crate::homology`].

mod compare;
mod reduce;
mod series;

pub use compare::{
    compare_resolved, direct_series_dims, direct_series_generators, sweep, KWindow,
    OracleComparison, SeriesDims, SeriesGenerators,
};
pub use reduce::{
    check_bounds, circle_series, empty_braid_series, reduce_series, M0Reading, Oracle,
    RewriteTrace, TraceStep,
};
pub use series::{ModuleSeries, Series, Variant};

use thiserror::Error;

use crate::homology::HomologyError;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("negative coefficient while reducing {word}")]
    Negative { word: String, trace: RewriteTrace },
    #[error(transparent)]
    Homology(#[from] HomologyError),
}
