//! Equivalence of standard modules `A^n` and `A^m` over a non-IBN algebra.
//!
//! Every non-trivial congruence on the additive monoid of ranks is described
//! by a pair `(N, K)`: two distinct ranks are identified exactly when both are
//! at least `N` and they agree modulo `K`. [`oracle_closure`] computes the same
//! relation by brute force from generating pairs and is used to check the
//! closed forms in tests.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::union_find::DisjointSet;
use crate::{Error, Result};

/// Rank of a standard module; `Rank(0)` is the zero module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rank(pub u64);

impl Rank {
    pub fn get(self) -> u64 {
        self.0
    }
}

impl From<u64> for Rank {
    fn from(value: u64) -> Self {
        Rank(value)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The pair `(N, K)`: `N` is the least rank taking part in a non-trivial
/// equivalence and `K` is the period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBasisType", into = "RawBasisType")]
pub struct BasisType {
    n_min: u64,
    k_period: u64,
}

#[derive(Serialize, Deserialize)]
struct RawBasisType {
    #[serde(rename = "N")]
    n: u64,
    #[serde(rename = "K")]
    k: u64,
}

impl TryFrom<RawBasisType> for BasisType {
    type Error = Error;

    fn try_from(raw: RawBasisType) -> Result<Self> {
        BasisType::new(raw.n, raw.k)
    }
}

impl From<BasisType> for RawBasisType {
    fn from(t: BasisType) -> Self {
        RawBasisType {
            n: t.n_min,
            k: t.k_period,
        }
    }
}

impl BasisType {
    /// The bottom of the type lattice, `(1, 1)`.
    pub const BOTTOM: BasisType = BasisType {
        n_min: 1,
        k_period: 1,
    };

    pub fn new(n_min: u64, k_period: u64) -> Result<Self> {
        if n_min == 0 || k_period == 0 {
            return Err(Error::InvalidBasisType { n_min, k_period });
        }
        Ok(BasisType { n_min, k_period })
    }

    pub fn n_min(self) -> u64 {
        self.n_min
    }

    pub fn k_period(self) -> u64 {
        self.k_period
    }
}

impl fmt::Display for BasisType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n_min, self.k_period)
    }
}

/// Finite set of witnessed equivalences `A^a ≃ A^b`, stored as `(min, max)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u64, u64)>", into = "Vec<(u64, u64)>")]
pub struct EquivalenceWitnessSet {
    pairs: BTreeSet<(u64, u64)>,
}

impl EquivalenceWitnessSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the pair `a ~ b`. Trivial pairs and pairs touching rank 0 are
    /// rejected.
    pub fn insert(&mut self, a: u64, b: u64) -> Result<()> {
        if a == 0 || b == 0 || a == b {
            return Err(Error::InvalidWitnessPair { a, b });
        }
        self.pairs.insert((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut ws = Self::new();
        for (a, b) in pairs {
            ws.insert(a, b)?;
        }
        Ok(ws)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// Largest rank mentioned by any pair.
    pub fn max_rank(&self) -> Option<u64> {
        self.pairs.iter().map(|&(_, b)| b).max()
    }
}

impl TryFrom<Vec<(u64, u64)>> for EquivalenceWitnessSet {
    type Error = Error;

    fn try_from(pairs: Vec<(u64, u64)>) -> Result<Self> {
        Self::from_pairs(pairs)
    }
}

impl From<EquivalenceWitnessSet> for Vec<(u64, u64)> {
    fn from(ws: EquivalenceWitnessSet) -> Self {
        ws.pairs.into_iter().collect()
    }
}

/// `A^n ≃ A^m` for an algebra of type `t`.
pub fn equiv_ranks(t: BasisType, n: Rank, m: Rank) -> bool {
    let (n, m) = (n.0, m.0);
    if n == m {
        return true;
    }
    n >= t.n_min && m >= t.n_min && n.abs_diff(m) % t.k_period == 0
}

/// Least rank equivalent to `n`.
pub fn canonical_rank(t: BasisType, n: Rank) -> Rank {
    if n.0 < t.n_min {
        n
    } else {
        Rank(t.n_min + (n.0 - t.n_min) % t.k_period)
    }
}

/// Number of equivalence classes of standard modules, the zero module included.
pub fn class_count(t: BasisType) -> Result<u64> {
    t.n_min
        .checked_add(t.k_period)
        .ok_or(Error::ArithmeticOverflow {
            what: "class count N + K",
        })
}

/// Basis Type of the congruence generated by `ws`: the least rank touched and
/// the gcd of the differences.
pub fn derive_type(ws: &EquivalenceWitnessSet) -> Result<BasisType> {
    let mut pairs = ws.pairs();
    let (a, b) = pairs.next().ok_or(Error::EmptyWitnessSet)?;
    let (n_min, k_period) = pairs.fold((a, b - a), |(n, k), (a, b)| (n.min(a), k.gcd(&(b - a))));
    BasisType::new(n_min, k_period)
}

/// Partition of `{0, …, bound}` into equivalence classes.
///
/// Classes are sorted internally and ordered by their least element, so two
/// partitions compare equal exactly when they describe the same relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    bound: u64,
    classes: Vec<Vec<u64>>,
    #[serde(skip)]
    labels: Vec<usize>,
}

impl Partition {
    fn from_labels(bound: u64, mut raw: impl FnMut(u64) -> u64) -> Self {
        // `raw` maps each element to an arbitrary representative.
        let mut classes: Vec<Vec<u64>> = Vec::new();
        let mut index_of_rep = std::collections::HashMap::new();
        let mut labels = Vec::with_capacity(bound as usize + 1);
        for x in 0..=bound {
            let rep = raw(x);
            let idx = *index_of_rep.entry(rep).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[idx].push(x);
            labels.push(idx);
        }
        Partition {
            bound,
            classes,
            labels,
        }
    }

    /// The relation of `equiv_ranks(t, ·, ·)` restricted to `{0, …, bound}`.
    pub fn of_basis_type(t: BasisType, bound: u64) -> Self {
        Self::from_labels(bound, |x| canonical_rank(t, Rank(x)).0)
    }

    /// The identity partition.
    pub fn discrete(bound: u64) -> Self {
        Self::from_labels(bound, |x| x)
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn classes(&self) -> &[Vec<u64>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn same_class(&self, a: u64, b: u64) -> bool {
        self.labels[a as usize] == self.labels[b as usize]
    }

    /// Common refinement: `a ~ b` iff related in both partitions.
    pub fn intersect(&self, other: &Partition) -> Partition {
        assert_eq!(self.bound, other.bound, "partitions over different ranges");
        let width = other.classes.len() as u64;
        Self::from_labels(self.bound, |x| {
            self.labels[x as usize] as u64 * width + other.labels[x as usize] as u64
        })
    }
}

/// Smallest translation-closed equivalence on `{0, …, bound}` containing `ws`,
/// computed by union-find iterated to a fixpoint.
pub fn oracle_closure(ws: &EquivalenceWitnessSet, bound: u64) -> Result<Partition> {
    if let Some(entry) = ws.max_rank().filter(|&m| m > bound) {
        return Err(Error::WitnessOutOfBound { entry, bound });
    }
    let size = usize::try_from(bound)
        .ok()
        .and_then(|b| b.checked_add(1))
        .ok_or(Error::ArithmeticOverflow {
            what: "oracle range",
        })?;
    let mut ds = DisjointSet::new(size);
    for (a, b) in ws.pairs() {
        ds.union(a as usize, b as usize);
    }
    // Closing under `x ~ y => x+1 ~ y+1` closes under every translation.
    loop {
        let mut changed = false;
        let roots: Vec<usize> = (0..size).map(|x| ds.find(x)).collect();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); size];
        for (x, &r) in roots.iter().enumerate() {
            members[r].push(x);
        }
        for class in members.iter().filter(|c| c.len() > 1) {
            for pair in class.windows(2) {
                let (x, y) = (pair[0], pair[1]);
                if y + 1 < size {
                    changed |= ds.union(x + 1, y + 1);
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Partition::from_labels(bound, |x| {
        ds.find(x as usize) as u64
    }))
}
