//! Lattice structure on Basis Types.
//!
//! `(N1, K1) <= (N2, K2)` iff `N1 <= N2` and `K1 | K2`. Join takes `(max, lcm)`,
//! meet takes `(min, gcd)`, and `(1, 1)` is the bottom. [`ExtendedType`]
//! adjoins a top element for algebras with IBN, so that "a unital hom
//! `A -> B` gives `type(B) <= type(A)`" also covers the IBN case.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{BasisType, Error, Result};

pub fn leq(a: BasisType, b: BasisType) -> bool {
    a.n_min() <= b.n_min() && b.k_period().is_multiple_of(a.k_period())
}

pub(crate) fn checked_lcm(a: u64, b: u64) -> Result<u64> {
    (a / a.gcd(&b))
        .checked_mul(b)
        .ok_or(Error::ArithmeticOverflow {
            what: "lcm of periods",
        })
}

pub fn join(a: BasisType, b: BasisType) -> Result<BasisType> {
    let k = checked_lcm(a.k_period(), b.k_period())?;
    BasisType::new(a.n_min().max(b.n_min()), k)
}

pub fn meet(a: BasisType, b: BasisType) -> BasisType {
    BasisType::new(a.n_min().min(b.n_min()), a.k_period().gcd(&b.k_period()))
        .expect("min and gcd of positive integers are positive")
}

/// A Basis Type, or `Top` for an algebra with IBN.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtendedType {
    Top,
    Value(BasisType),
}

impl From<BasisType> for ExtendedType {
    fn from(t: BasisType) -> Self {
        ExtendedType::Value(t)
    }
}

pub fn ext_leq(a: ExtendedType, b: ExtendedType) -> bool {
    match (a, b) {
        (_, ExtendedType::Top) => true,
        (ExtendedType::Top, ExtendedType::Value(_)) => false,
        (ExtendedType::Value(a), ExtendedType::Value(b)) => leq(a, b),
    }
}

pub fn ext_join(a: ExtendedType, b: ExtendedType) -> Result<ExtendedType> {
    match (a, b) {
        (ExtendedType::Top, _) | (_, ExtendedType::Top) => Ok(ExtendedType::Top),
        (ExtendedType::Value(a), ExtendedType::Value(b)) => join(a, b).map(ExtendedType::Value),
    }
}

pub fn ext_meet(a: ExtendedType, b: ExtendedType) -> ExtendedType {
    match (a, b) {
        (ExtendedType::Top, x) | (x, ExtendedType::Top) => x,
        (ExtendedType::Value(a), ExtendedType::Value(b)) => ExtendedType::Value(meet(a, b)),
    }
}
