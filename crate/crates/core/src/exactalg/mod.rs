//! Exact arithmetic: rationals, bigraded polynomials, sparse linear algebra.

mod linalg;
mod poly;
mod rational;

pub use linalg::{
    axpy, kernel, rank, rank_kernel_image, scale_vec, solve, sparse_from_entries, Echelon, QMatrix,
    RankKernelImage, Reduction, SparseVec,
};
pub use poly::{
    exponent_vectors, monomials_of_degree, newton_g, quotient_pi, Bidegree, Exponents, Monomial,
    Poly,
};
pub use rational::Rat;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgError {
    #[error("polynomials over different rings ({left} vs {right} variables)")]
    VariableMismatch { left: usize, right: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    NotDivisible,
}
