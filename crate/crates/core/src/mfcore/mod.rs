//! Graded matrix factorizations over `Q[a, x₁..x_m]`, the MOY building
//! blocks, χ-maps and the cube complex of a closed braid.

mod chi;
mod complex;
mod mf;
mod morphism;
mod moy;

pub use chi::{
    cached_chi_pair, chi_pair, gamma0, gamma0_rows, gamma1, gamma1_rows, ChiPair, Gamma0Form, IN_L,
    IN_R, LOCAL_VARS, OUT_L, OUT_R,
};
pub use complex::*;
pub use mf::{GenGrading, GradedFreeModule, KoszulRow, MatrixFactorization, PolyMatrix};
pub use morphism::{
    bracket, find_homotopy, solve_morphisms, solve_morphisms_constrained, MfMorphism, MorphismSpace,
};
pub use moy::{
    arc_row, circle_row, moy_mf, wide_edge_rows, MoyEdge, MoyGraph, MoyPiece, MoyVertex,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MfError {
    #[error("factors live in different rings")]
    RingMismatch,
    #[error("Koszul row {row} is not homogeneous of the right degree")]
    BadRow { row: usize },
    #[error("map does not have odd parity")]
    Parity,
    #[error("entry ({row}, {col}) is not homogeneous of the forced degree")]
    Inhomogeneous { row: usize, col: usize },
    #[error("morphism degree {needed} exceeds cap {cap}")]
    DegreeCap { needed: u32, cap: u32 },
    #[error("invalid MOY graph: {0}")]
    InvalidGraph(String),
    #[error("2-colored edge {0} carries a mark")]
    MarkedWideEdge(usize),
    #[error("edge {0} lies on a cycle without marks")]
    UnmarkedEdge(usize),
    #[error("potential is not the boundary sum")]
    Potential,
    #[error("no nontrivial χ-map in the expected degree")]
    NoChiSolution,
    #[error("normalization of {0} failed")]
    ChiNormalization(String),
    #[error("cube complex check failed: {0}")]
    Check(String),
}
