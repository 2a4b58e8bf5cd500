pub mod braid;
pub mod exactalg;
pub mod homology;
pub mod mfcore;
pub mod moyoracle;
