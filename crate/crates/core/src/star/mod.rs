//! Noncommutative *-polynomials over finitely presented *-algebras, and the
//! rectangular unitary matrices that witness `A^a ≃ A^b`.

mod matrix;
mod poly;
mod presentation;

pub use matrix::{
    verify_isometry, verify_unitary, witness, AMatrix, Check, IsometryReport, MatrixFile,
    Properness, Residual, Verification, WitnessAlgebra,
};
pub use poly::{Generator, Letter, NcPoly, Word};
pub use presentation::{
    ContractionRule, Inconclusive, MonomialRule, Presentation, DEFAULT_STEP_BOUND,
};
