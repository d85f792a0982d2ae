//! Symbolic engine for Basis Types of unital C*-algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`rank`] decides equivalence of standard modules `A^n` from a Basis Type
//!   and carries a brute-force congruence-closure oracle.
//! * [`lattice`] is the order, join and meet on Basis Types, extended with a
//!   top element standing for "has IBN".
//! * [`calculus`] propagates type knowledge through an AST of constructions.
//! * [`star`] is exact noncommutative *-polynomial arithmetic and rewriting,
//!   used to build and check rectangular unitary witness matrices.
//! * [`catalog`] is the registry of named algebras and its consistency rules.

pub mod calculus;
pub mod catalog;
mod error;
pub mod lattice;
pub mod rank;
pub mod star;
mod union_find;

pub use calculus::{infer, normalize_exact, AlgebraExpr, Knowledge, Status, UpperK, UpperN};
pub use catalog::{Catalog, CatalogEntry, Flag, UnitOrder};
pub use error::{Error, Result};
pub use lattice::ExtendedType;
pub use rank::{BasisType, EquivalenceWitnessSet, Partition, Rank};
pub use star::{AMatrix, NcPoly, Presentation, Verification};
