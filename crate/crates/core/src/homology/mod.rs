//! Degreewise exact homology of cube complexes: `H(·, d_mf)`, the induced
//! `d_χ`, the final `𝓗_N` as a graded `ℚ[a]`-module, the `sl(N)`
//! specialization and the structural verifiers.

mod audit;
mod engine;
mod golden;
mod module;
mod report;
mod stab;

pub use audit::{verify_structure_theorem, StructureAudit};
pub use golden::unknot_homology;
pub use module::{decompose_profile, Component, GradedQaModule};
pub use report::{
    complex_homology, component_matrix_d, default_jmax, default_kmax, mf_homology_dims,
    sln_homology, sln_of_complex, total_homology, Audits, ComplexHomology, DegreeWindow,
    GradedDims, HomologyOptions, HomologyReport, SlnDims, SCHEMA_VERSION,
};
pub use stab::{cone_pi0_check, stab_check, ConeVerdict, StabVerdict};

use thiserror::Error;

use crate::braid::BraidError;
use crate::mfcore::MfError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error(transparent)]
    Mf(#[from] MfError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("map leaves the computed degree range")]
    Degree,
    #[error("representative is not a cycle")]
    NotACycle,
}
