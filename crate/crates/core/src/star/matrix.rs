use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::{Generator, NcPoly};
use super::presentation::{Inconclusive, Presentation};
use crate::rank::{equiv_ranks, Rank};
use crate::{BasisType, Error, Result};

/// Rectangular matrix over a *-algebra, entries row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<NcPoly>,
}

impl AMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<NcPoly>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("{rows}x{cols} matrix is empty")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(AMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n * n).map(|k| NcPoly::delta(k / n, k % n)).collect();
        AMatrix::new(n, n, entries).expect("identity of positive size")
    }

    /// A single row `[g_1 ... g_k]`.
    pub fn row(gens: impl IntoIterator<Item = Generator>) -> Result<Self> {
        let entries: Vec<NcPoly> = gens.into_iter().map(NcPoly::generator).collect();
        AMatrix::new(1, entries.len(), entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &NcPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[NcPoly] {
        &self.entries
    }

    pub fn adjoint(&self) -> AMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).involute());
            }
        }
        AMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &AMatrix) -> Result<AMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = NcPoly::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        AMatrix::new(self.rows, other.cols, entries)
    }

    pub fn sub(&self, other: &AMatrix) -> Result<AMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "cannot subtract {}x{} from {}x{}",
                other.rows, other.cols, self.rows, self.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        AMatrix::new(self.rows, self.cols, entries)
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &AMatrix) -> AMatrix {
        let (rows, cols) = (self.rows + other.rows, self.cols + other.cols);
        let mut entries = vec![NcPoly::zero(); rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries[i * cols + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                entries[(self.rows + i) * cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        AMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Removes column `index` (1-based).
    pub fn delete_column(&self, index: usize) -> Result<AMatrix> {
        if index == 0 || index > self.cols {
            return Err(Error::IndexOutOfRange {
                index,
                cols: self.cols,
            });
        }
        if self.cols < 2 {
            return Err(Error::Shape("cannot delete the only column".into()));
        }
        let entries = self
            .entries
            .iter()
            .enumerate()
            .filter(|(k, _)| k % self.cols != index - 1)
            .map(|(_, p)| p.clone())
            .collect();
        AMatrix::new(self.rows, self.cols - 1, entries)
    }
}

impl fmt::Display for AMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
            if i + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

/// Which identity a residual belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Check {
    #[serde(rename = "UU*=I")]
    RowSide,
    #[serde(rename = "U*U=I")]
    ColumnSide,
}

/// An entry of `UU* - I` or `U*U - I` that did not rewrite to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub check: Check,
    pub row: usize,
    pub col: usize,
    /// `None` when the step bound ran out.
    pub remainder: Option<NcPoly>,
}

/// Outcome of a one-sided check: rewriting can confirm an identity but never
/// refute one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Verified,
    Inconclusive(Vec<Residual>),
}

impl Verification {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verification::Verified)
    }
}

fn residuals(
    product: &AMatrix,
    check: Check,
    pres: &Presentation,
    step_bound: usize,
) -> Vec<Residual> {
    let diff = product
        .sub(&AMatrix::identity(product.rows))
        .expect("square product");
    let mut out = Vec::new();
    for i in 0..diff.rows {
        for j in 0..diff.cols {
            let remainder = match pres.normalize(diff.get(i, j), step_bound) {
                Ok(p) if p.is_zero() => continue,
                Ok(p) => Some(p),
                Err(Inconclusive { .. }) => None,
            };
            out.push(Residual {
                check,
                row: i + 1,
                col: j + 1,
                remainder,
            });
        }
    }
    out
}

fn to_verification(res: Vec<Residual>) -> Verification {
    if res.is_empty() {
        Verification::Verified
    } else {
        Verification::Inconclusive(res)
    }
}

/// Checks `UU* = I` and `U*U = I` entrywise by rewriting.
pub fn verify_unitary(u: &AMatrix, pres: &Presentation, step_bound: usize) -> Verification {
    let adj = u.adjoint();
    let mut res = residuals(
        &u.mul(&adj).expect("shapes agree"),
        Check::RowSide,
        pres,
        step_bound,
    );
    res.extend(residuals(
        &adj.mul(u).expect("shapes agree"),
        Check::ColumnSide,
        pres,
        step_bound,
    ));
    to_verification(res)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Properness {
    /// `VV* - I` has a non-zero normal form. This is evidence, not a proof,
    /// that `V` is a proper isometry.
    SyntacticallyProper,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryReport {
    pub isometry: Verification,
    pub properness: Properness,
}

/// Checks `V*V = I` and reports whether `VV* - I` survives rewriting.
pub fn verify_isometry(v: &AMatrix, pres: &Presentation, step_bound: usize) -> IsometryReport {
    let adj = v.adjoint();
    let isometry = to_verification(residuals(
        &adj.mul(v).expect("shapes agree"),
        Check::ColumnSide,
        pres,
        step_bound,
    ));
    let range = residuals(
        &v.mul(&adj).expect("shapes agree"),
        Check::RowSide,
        pres,
        step_bound,
    );
    let properness = if range.iter().any(|r| r.remainder.is_some()) {
        Properness::SyntacticallyProper
    } else {
        Properness::Unknown
    };
    IsometryReport {
        isometry,
        properness,
    }
}

/// Algebras with a built-in rectangular unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessAlgebra {
    /// `O_p`, with the `1 x p` row of Cuntz isometries.
    Cuntz(u32),
    /// `U^nc_{m,n}`, with its generating `m x n` unitary.
    Unc(u32, u32),
}

impl WitnessAlgebra {
    pub fn cuntz(p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::NoWitnessConstruction(format!("O({p})")));
        }
        Ok(WitnessAlgebra::Cuntz(p))
    }

    pub fn unc(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n <= m {
            return Err(Error::NoWitnessConstruction(format!("Unc({m},{n})")));
        }
        Ok(WitnessAlgebra::Unc(m, n))
    }

    /// Resolves a catalog id such as `O:3` or `Unc:2,5`.
    pub fn from_catalog_id(id: &str) -> Result<Self> {
        let none = || Error::NoWitnessConstruction(id.to_string());
        let num = |s: &str| s.parse::<u32>().map_err(|_| none());
        match id.split_once(':') {
            Some(("O", p)) => Self::cuntz(num(p)?),
            Some(("Unc", mn)) => {
                let (m, n) = mn.split_once(',').ok_or_else(none)?;
                Self::unc(num(m)?, num(n)?)
            }
            _ => Err(none()),
        }
    }

    pub fn basis_type(self) -> BasisType {
        let (n, k) = match self {
            WitnessAlgebra::Cuntz(p) => (1, p - 1),
            WitnessAlgebra::Unc(m, n) => (m, n - m),
        };
        BasisType::new(n.into(), k.into()).expect("validated at construction")
    }

    pub fn presentation(self) -> Presentation {
        match self {
            WitnessAlgebra::Cuntz(p) => Presentation::cuntz(p),
            WitnessAlgebra::Unc(m, n) => Presentation::unc(m, n),
        }
        .expect("validated at construction")
    }

    pub fn base_unitary(self) -> AMatrix {
        match self {
            WitnessAlgebra::Cuntz(p) => AMatrix::row((1..=p).map(Generator::V)),
            WitnessAlgebra::Unc(m, n) => {
                let entries = (1..=m)
                    .flat_map(|i| (1..=n).map(move |j| NcPoly::generator(Generator::U(i, j))))
                    .collect();
                AMatrix::new(m as usize, n as usize, entries)
            }
        }
        .expect("non-empty base unitary")
    }
}

/// An `a x b` unitary over `alg`, witnessing `A^a ≃ A^b`.
///
/// For `a < b` this is the product of the lifts `I_{r-N} ⊕ U` for
/// `r = a, a+K, …, b-K`, each an `r x (r+K)` unitary. For `a > b` it is the
/// adjoint of the `b x a` witness.
pub fn witness(alg: WitnessAlgebra, a: Rank, b: Rank) -> Result<AMatrix> {
    let t = alg.basis_type();
    if a.0 == 0 || b.0 == 0 || !equiv_ranks(t, a, b) {
        return Err(Error::NotEquivalent {
            a: a.0,
            b: b.0,
            n_min: t.n_min(),
            k_period: t.k_period(),
        });
    }
    if a > b {
        return witness(alg, b, a).map(|w| w.adjoint());
    }
    let size = |r: u64| {
        usize::try_from(r).map_err(|_| Error::ArithmeticOverflow {
            what: "matrix size",
        })
    };
    let base = alg.base_unitary();
    let mut acc = AMatrix::identity(size(a.0)?);
    let mut r = a.0;
    while r < b.0 {
        let pad = size(r - t.n_min())?;
        let lift = if pad == 0 {
            base.clone()
        } else {
            AMatrix::identity(pad).direct_sum(&base)
        };
        acc = acc.mul(&lift)?;
        r += t.k_period();
    }
    Ok(acc)
}

/// On-disk matrix format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
    pub presentation: String,
}

impl MatrixFile {
    pub fn from_matrix(m: &AMatrix, pres: &Presentation) -> Self {
        MatrixFile {
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.iter().map(NcPoly::to_string).collect(),
            presentation: pres.id().to_string(),
        }
    }

    /// Parses entries and the presentation; every generator must belong to it.
    pub fn load(&self) -> Result<(AMatrix, Presentation)> {
        let pres = Presentation::from_id(&self.presentation)?;
        let entries = self
            .entries
            .iter()
            .map(|s| {
                let p = NcPoly::parse(s)?;
                pres.check_generators(&p)?;
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((AMatrix::new(self.rows, self.cols, entries)?, pres))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
