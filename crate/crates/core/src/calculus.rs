//! Propagation of Basis Type knowledge through algebra constructions.
//!
//! This is a small abstract interpreter: every node of an [`AlgebraExpr`] is
//! mapped to a [`Knowledge`] value holding an IBN status and an interval
//! `lo <= type <= (hi_n, hi_k)` in the type lattice. Direct sums are exact
//! (join); tensor products, quotients, unital images and inductive limits
//! only give upper bounds; extensions give a lower bound.
//!
//! For `Unknown` status the interval is conditional: it bounds the type in
//! case the algebra turns out not to have IBN.

use std::fmt;

use num_integer::Integer;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::catalog::Catalog;
use crate::lattice::{self, checked_lcm};
use crate::{BasisType, Error, Result};

/// Construction tree over catalog leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgebraExpr {
    /// Named catalog entry, e.g. `O:3` or `Unc:2,5`.
    Leaf(String),
    /// An algebra known only through its exact type.
    ExactLeaf(BasisType),
    /// An algebra known only to have IBN.
    IbnLeaf,
    DirectSum(Box<AlgebraExpr>, Box<AlgebraExpr>),
    Tensor(Box<AlgebraExpr>, Box<AlgebraExpr>),
    Quotient(Box<AlgebraExpr>),
    /// Target of a unital *-homomorphism out of the inner algebra.
    HomImage(Box<AlgebraExpr>),
    /// An algebra having the inner algebra as a unital quotient.
    ExtensionOf(Box<AlgebraExpr>),
    /// A corner `pBp` of a purely infinite simple algebra with `[p] = 0` in K0.
    CornerOfInfiniteSimple,
    /// Inductive limit along unital connecting maps.
    InductiveLimit(Vec<AlgebraExpr>),
}

impl AlgebraExpr {
    pub fn leaf(id: impl Into<String>) -> Self {
        AlgebraExpr::Leaf(id.into())
    }

    pub fn direct_sum(a: AlgebraExpr, b: AlgebraExpr) -> Self {
        AlgebraExpr::DirectSum(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: AlgebraExpr, b: AlgebraExpr) -> Self {
        AlgebraExpr::Tensor(Box::new(a), Box::new(b))
    }

    pub fn quotient(a: AlgebraExpr) -> Self {
        AlgebraExpr::Quotient(Box::new(a))
    }

    pub fn hom_image(a: AlgebraExpr) -> Self {
        AlgebraExpr::HomImage(Box::new(a))
    }

    pub fn extension_of(a: AlgebraExpr) -> Self {
        AlgebraExpr::ExtensionOf(Box::new(a))
    }

    pub fn depth(&self) -> usize {
        use AlgebraExpr::*;
        match self {
            Leaf(_) | ExactLeaf(_) | IbnLeaf | CornerOfInfiniteSimple => 1,
            DirectSum(a, b) | Tensor(a, b) => 1 + a.depth().max(b.depth()),
            Quotient(a) | HomImage(a) | ExtensionOf(a) => 1 + a.depth(),
            InductiveLimit(parts) => 1 + parts.iter().map(Self::depth).max().unwrap_or(0),
        }
    }
}

/// Prints the expression in the command-line DSL syntax.
impl fmt::Display for AlgebraExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AlgebraExpr::*;
        match self {
            Leaf(id) => write_leaf(f, id),
            ExactLeaf(t) => write!(f, "type({},{})", t.n_min(), t.k_period()),
            IbnLeaf => f.write_str("ibn"),
            DirectSum(a, b) => write!(f, "oplus({a},{b})"),
            Tensor(a, b) => write!(f, "tensor({a},{b})"),
            Quotient(a) => write!(f, "quotient({a})"),
            HomImage(a) => write!(f, "hom({a})"),
            ExtensionOf(a) => write!(f, "ext({a})"),
            CornerOfInfiniteSimple => f.write_str("corner_infinite_simple"),
            InductiveLimit(parts) => {
                f.write_str("limit(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn write_leaf(f: &mut fmt::Formatter<'_>, id: &str) -> fmt::Result {
    match id.split_once(':') {
        Some(("O", n)) => write!(f, "O({n})"),
        Some(("Unc", mn)) => write!(f, "Unc({mn})"),
        Some(("Rordam", n)) => write!(f, "Rordam({n})"),
        _ => f.write_str(id),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "IBN")]
    KnownIbn,
    #[serde(rename = "NonIBN")]
    KnownNonIbn,
    Unknown,
}

/// Upper bound on `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpperN {
    Finite(u64),
    Infinity,
}

/// Upper bound on `K` in the divisibility order; `AnyK` is its top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpperK {
    Finite(u64),
    AnyK,
}

impl UpperN {
    fn join(self, other: UpperN) -> UpperN {
        match (self, other) {
            (UpperN::Finite(a), UpperN::Finite(b)) => UpperN::Finite(a.max(b)),
            _ => UpperN::Infinity,
        }
    }

    fn meet(self, other: UpperN) -> UpperN {
        match (self, other) {
            (UpperN::Finite(a), UpperN::Finite(b)) => UpperN::Finite(a.min(b)),
            (UpperN::Infinity, x) | (x, UpperN::Infinity) => x,
        }
    }

    /// `self` is at most `other`.
    pub fn within(self, other: UpperN) -> bool {
        match (self, other) {
            (_, UpperN::Infinity) => true,
            (UpperN::Infinity, UpperN::Finite(_)) => false,
            (UpperN::Finite(a), UpperN::Finite(b)) => a <= b,
        }
    }
}

impl UpperK {
    fn join(self, other: UpperK) -> Result<UpperK> {
        match (self, other) {
            (UpperK::Finite(a), UpperK::Finite(b)) => checked_lcm(a, b).map(UpperK::Finite),
            _ => Ok(UpperK::AnyK),
        }
    }

    fn meet(self, other: UpperK) -> UpperK {
        match (self, other) {
            (UpperK::Finite(a), UpperK::Finite(b)) => UpperK::Finite(a.gcd(&b)),
            (UpperK::AnyK, x) | (x, UpperK::AnyK) => x,
        }
    }

    /// `self` divides `other`.
    pub fn within(self, other: UpperK) -> bool {
        match (self, other) {
            (_, UpperK::AnyK) => true,
            (UpperK::AnyK, UpperK::Finite(_)) => false,
            (UpperK::Finite(a), UpperK::Finite(b)) => b % a == 0,
        }
    }

    fn admits(self, k: u64) -> bool {
        match self {
            UpperK::AnyK => true,
            UpperK::Finite(h) => h % k == 0,
        }
    }
}

macro_rules! sentinel_serde {
    ($ty:ident, $top:ident, $name:literal) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                match self {
                    $ty::Finite(v) => s.serialize_u64(*v),
                    $ty::$top => s.serialize_str($name),
                }
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                #[derive(Deserialize)]
                #[serde(untagged)]
                enum Raw {
                    Num(u64),
                    Word(String),
                }
                match Raw::deserialize(d)? {
                    Raw::Num(0) => Err(de::Error::custom("upper bound must be positive")),
                    Raw::Num(v) => Ok($ty::Finite(v)),
                    Raw::Word(w) if w == $name => Ok($ty::$top),
                    Raw::Word(w) => Err(de::Error::custom(format!(
                        "expected a positive integer or \"{}\", found \"{w}\"",
                        $name
                    ))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                match self {
                    $ty::Finite(v) => v.fmt(f),
                    $ty::$top => f.write_str($name),
                }
            }
        }
    };
}

sentinel_serde!(UpperN, Infinity, "Infinity");
sentinel_serde!(UpperK, AnyK, "AnyK");

/// What is known about the Basis Type of an algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Knowledge {
    pub status: Status,
    pub lo: BasisType,
    pub hi_n: UpperN,
    pub hi_k: UpperK,
}

impl Knowledge {
    pub fn ibn() -> Self {
        Knowledge {
            status: Status::KnownIbn,
            ..Self::unknown()
        }
    }

    pub fn unknown() -> Self {
        Knowledge {
            status: Status::Unknown,
            lo: BasisType::BOTTOM,
            hi_n: UpperN::Infinity,
            hi_k: UpperK::AnyK,
        }
    }

    pub fn exact(t: BasisType) -> Self {
        Knowledge {
            status: Status::KnownNonIbn,
            lo: t,
            hi_n: UpperN::Finite(t.n_min()),
            hi_k: UpperK::Finite(t.k_period()),
        }
    }

    /// Non-IBN with only upper bounds.
    pub fn non_ibn_below(hi_n: UpperN, hi_k: UpperK) -> Self {
        Knowledge {
            status: Status::KnownNonIbn,
            lo: BasisType::BOTTOM,
            hi_n,
            hi_k,
        }
    }

    /// Bounds are consistent: `lo.N <= hi_n` and `lo.K | hi_k`.
    pub fn is_well_formed(&self) -> bool {
        self.status == Status::KnownIbn
            || (UpperN::Finite(self.lo.n_min()).within(self.hi_n)
                && self.hi_k.admits(self.lo.k_period()))
    }

    /// Whether the Basis Type `t` is allowed by these bounds.
    pub fn admits(&self, t: BasisType) -> bool {
        self.status != Status::KnownIbn
            && lattice::leq(self.lo, t)
            && UpperN::Finite(t.n_min()).within(self.hi_n)
            && self.hi_k.admits(t.k_period())
    }

    /// `self` carries at least as much information as `coarser`: same known
    /// status (or `coarser` is `Unknown`) and a sub-interval.
    pub fn refines(&self, coarser: &Knowledge) -> bool {
        match (self.status, coarser.status) {
            (_, Status::Unknown) | (Status::KnownNonIbn, Status::KnownNonIbn) => {
                self.status == Status::KnownIbn || self.interval_within(coarser)
            }
            (Status::KnownIbn, Status::KnownIbn) => true,
            _ => false,
        }
    }

    fn interval_within(&self, other: &Knowledge) -> bool {
        lattice::leq(other.lo, self.lo)
            && self.hi_n.within(other.hi_n)
            && self.hi_k.within(other.hi_k)
    }

    #[cfg(test)]
    fn has_trivial_uppers(&self) -> bool {
        self.hi_n == UpperN::Infinity && self.hi_k == UpperK::AnyK
    }
}

impl fmt::Display for Knowledge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.status, normalize_exact(self)) {
            (Status::KnownIbn, _) => f.write_str("IBN"),
            (_, Some(t)) => write!(f, "NonIBN, exact type {t}"),
            (status, None) => {
                let label = if status == Status::Unknown {
                    "Unknown"
                } else {
                    "NonIBN"
                };
                write!(
                    f,
                    "{label}, {} <= type <= ({}, {})",
                    self.lo, self.hi_n, self.hi_k
                )
            }
        }
    }
}

/// The exact Basis Type when the bounds pin down a single value.
pub fn normalize_exact(k: &Knowledge) -> Option<BasisType> {
    if k.status != Status::KnownNonIbn {
        return None;
    }
    match (k.hi_n, k.hi_k) {
        (UpperN::Finite(n), UpperK::Finite(kk)) if n == k.lo.n_min() && kk == k.lo.k_period() => {
            Some(k.lo)
        }
        _ => None,
    }
}

/// Infers what is known about the type of `expr`.
pub fn infer(expr: &AlgebraExpr, catalog: &Catalog) -> Result<Knowledge> {
    use AlgebraExpr::*;
    use Status::*;
    let k = match expr {
        Leaf(id) => catalog.lookup(id)?.knowledge,
        ExactLeaf(t) => Knowledge::exact(*t),
        IbnLeaf => Knowledge::ibn(),
        DirectSum(a, b) => {
            let (a, b) = (infer(a, catalog)?, infer(b, catalog)?);
            match (a.status, b.status) {
                (KnownIbn, _) | (_, KnownIbn) => Knowledge::ibn(),
                (KnownNonIbn, KnownNonIbn) => Knowledge {
                    status: KnownNonIbn,
                    lo: lattice::join(a.lo, b.lo)?,
                    hi_n: a.hi_n.join(b.hi_n),
                    hi_k: a.hi_k.join(b.hi_k)?,
                },
                _ => Knowledge {
                    lo: lattice::join(a.lo, b.lo)?,
                    ..Knowledge::unknown()
                },
            }
        }
        Tensor(a, b) => {
            let (a, b) = (infer(a, catalog)?, infer(b, catalog)?);
            let status = if a.status == KnownNonIbn || b.status == KnownNonIbn {
                KnownNonIbn
            } else {
                Unknown
            };
            let (hi_n, hi_k) = [a, b]
                .iter()
                .filter(|k| k.status == KnownNonIbn)
                .fold((UpperN::Infinity, UpperK::AnyK), |(n, kk), k| {
                    (n.meet(k.hi_n), kk.meet(k.hi_k))
                });
            Knowledge {
                status,
                lo: BasisType::BOTTOM,
                hi_n,
                hi_k,
            }
        }
        Quotient(a) | HomImage(a) => {
            let a = infer(a, catalog)?;
            if a.status == KnownNonIbn {
                Knowledge::non_ibn_below(a.hi_n, a.hi_k)
            } else {
                Knowledge::unknown()
            }
        }
        ExtensionOf(q) => {
            let q = infer(q, catalog)?;
            match q.status {
                KnownIbn => Knowledge::ibn(),
                KnownNonIbn => Knowledge {
                    lo: q.lo,
                    ..Knowledge::unknown()
                },
                Unknown => Knowledge::unknown(),
            }
        }
        CornerOfInfiniteSimple => Knowledge::non_ibn_below(UpperN::Infinity, UpperK::Finite(1)),
        InductiveLimit(parts) => {
            if parts.is_empty() {
                return Err(Error::EmptyLimit);
            }
            let parts = parts
                .iter()
                .map(|p| infer(p, catalog))
                .collect::<Result<Vec<_>>>()?;
            if parts.iter().all(|k| k.status == KnownIbn) {
                Knowledge::ibn()
            } else if parts.iter().any(|k| k.status == KnownNonIbn) {
                let (hi_n, hi_k) = parts
                    .iter()
                    .filter(|k| k.status == KnownNonIbn)
                    .fold((UpperN::Infinity, UpperK::AnyK), |(n, kk), k| {
                        (n.meet(k.hi_n), kk.meet(k.hi_k))
                    });
                Knowledge::non_ibn_below(hi_n, hi_k)
            } else {
                Knowledge::unknown()
            }
        }
    };
    debug_assert!(k.is_well_formed(), "ill-formed knowledge {k:?} for {expr}");
    Ok(k)
}
