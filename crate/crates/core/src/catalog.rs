//! Registry of named algebras with their K0 unit order, IBN flags and type
//! knowledge.
//!
//! Fixed entries are listed directly; the families `O:n`, `Unc:m,n` and
//! `Rordam:N` are materialised from the id on lookup. User entries can be
//! loaded from JSON and must pass [`validate_entry`] first.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::calculus::{normalize_exact, Knowledge, Status, UpperK};
use crate::star::Presentation;
use crate::{BasisType, Error, Result};

/// Additive order of the unit class in K0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitOrder {
    Finite(u64),
    Infinite,
    Unknown,
}

impl Serialize for UnitOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            UnitOrder::Finite(v) => s.serialize_u64(*v),
            UnitOrder::Infinite => s.serialize_str("Infinite"),
            UnitOrder::Unknown => s.serialize_str("Unknown"),
        }
    }
}

impl<'de> Deserialize<'de> for UnitOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(0) => Err(de::Error::custom("unit order must be positive")),
            Raw::Num(v) => Ok(UnitOrder::Finite(v)),
            Raw::Word(w) if w == "Infinite" => Ok(UnitOrder::Infinite),
            Raw::Word(w) if w == "Unknown" => Ok(UnitOrder::Unknown),
            Raw::Word(w) => Err(de::Error::custom(format!("bad unit order \"{w}\""))),
        }
    }
}

impl fmt::Display for UnitOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitOrder::Finite(v) => v.fmt(f),
            UnitOrder::Infinite => f.write_str("infinite"),
            UnitOrder::Unknown => f.write_str("unknown"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flag {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Yes => "yes",
            Flag::No => "no",
            Flag::Unknown => "unknown",
        })
    }
}

/// Where an entry's facts come from. `StandardFact` marks entries relying on
/// facts stated outside the primary literature the catalog is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvenanceLevel {
    Sourced,
    StandardFact,
    User,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub id: String,
    pub display_name: String,
    pub k0_unit_order: UnitOrder,
    pub ibn: bool,
    pub ibn1: Flag,
    pub ibn2_stably_finite: Flag,
    pub knowledge: Knowledge,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation_id: Option<String>,
    pub provenance_level: ProvenanceLevel,
    pub provenance_note: String,
}

impl CatalogEntry {
    pub fn exact_type(&self) -> Option<BasisType> {
        normalize_exact(&self.knowledge)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// IBN2 implies IBN1 implies IBN.
    IbnHierarchy,
    /// IBN iff the unit class has infinite order in K0.
    UnitOrder,
    /// An exact type `(N, K)` has `K` equal to the unit order.
    PeriodMatchesUnitOrder,
    /// Knowledge status agrees with the IBN flag.
    KnowledgeStatus,
    /// Knowledge bounds are consistent.
    KnowledgeBounds,
    /// The presentation id resolves.
    Presentation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub entry: String,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}: {}", self.entry, self.rule, self.message)
    }
}

pub fn validate_entry(e: &CatalogEntry) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut flag = |rule, message: String| {
        out.push(Violation {
            entry: e.id.clone(),
            rule,
            message,
        })
    };

    if e.ibn2_stably_finite == Flag::Yes && e.ibn1 != Flag::Yes {
        flag(
            Rule::IbnHierarchy,
            format!("IBN2 holds but IBN1 is {}", e.ibn1),
        );
    }
    if e.ibn1 == Flag::Yes && !e.ibn {
        flag(Rule::IbnHierarchy, "IBN1 holds but IBN fails".into());
    }
    match (e.ibn, e.k0_unit_order) {
        (true, UnitOrder::Infinite) | (false, UnitOrder::Finite(_) | UnitOrder::Unknown) => {}
        (true, order) => flag(
            Rule::UnitOrder,
            format!("IBN requires infinite unit order, found {order}"),
        ),
        (false, _) => flag(
            Rule::UnitOrder,
            "infinite unit order forces IBN, but ibn is false".into(),
        ),
    }
    let expected = if e.ibn {
        Status::KnownIbn
    } else {
        Status::KnownNonIbn
    };
    if e.knowledge.status != expected {
        flag(
            Rule::KnowledgeStatus,
            format!(
                "knowledge status {:?} contradicts ibn = {}",
                e.knowledge.status, e.ibn
            ),
        );
    }
    if !e.knowledge.is_well_formed() {
        flag(
            Rule::KnowledgeBounds,
            format!("inconsistent bounds: {}", e.knowledge),
        );
    }
    if !e.ibn {
        match (e.exact_type(), e.k0_unit_order) {
            (Some(t), UnitOrder::Finite(k)) if t.k_period() != k => flag(
                Rule::PeriodMatchesUnitOrder,
                format!(
                    "type {t} has period {} but the unit order is {k}",
                    t.k_period()
                ),
            ),
            (Some(t), UnitOrder::Unknown) => flag(
                Rule::PeriodMatchesUnitOrder,
                format!(
                    "type {t} is exact, so the unit order must be {}",
                    t.k_period()
                ),
            ),
            (None, UnitOrder::Finite(k)) => {
                let lo_divides = k % e.knowledge.lo.k_period() == 0;
                let hi_admits = match e.knowledge.hi_k {
                    UpperK::AnyK => true,
                    UpperK::Finite(h) => h % k == 0,
                };
                if !(lo_divides && hi_admits) {
                    flag(
                        Rule::PeriodMatchesUnitOrder,
                        format!("unit order {k} lies outside the period bounds"),
                    );
                }
            }
            _ => {}
        }
    }
    if let Some(pid) = &e.presentation_id {
        if let Err(err) = Presentation::from_id(pid) {
            flag(Rule::Presentation, err.to_string());
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn entry(
    id: impl Into<String>,
    display_name: impl Into<String>,
    k0_unit_order: UnitOrder,
    flags: (bool, Flag, Flag),
    knowledge: Knowledge,
    presentation_id: Option<String>,
    provenance_level: ProvenanceLevel,
    provenance_note: impl Into<String>,
) -> CatalogEntry {
    let (ibn, ibn1, ibn2_stably_finite) = flags;
    CatalogEntry {
        id: id.into(),
        display_name: display_name.into(),
        k0_unit_order,
        ibn,
        ibn1,
        ibn2_stably_finite,
        knowledge,
        presentation_id,
        provenance_level,
        provenance_note: provenance_note.into(),
    }
}

fn exact(n: u64, k: u64) -> Knowledge {
    Knowledge::exact(BasisType::new(n, k).expect("positive components"))
}

const NON_IBN: (bool, Flag, Flag) = (false, Flag::No, Flag::No);

fn fixed_entry(id: &str) -> Option<CatalogEntry> {
    use ProvenanceLevel::*;
    let e = match id {
        "Commutative" => entry(
            id,
            "commutative unital C*-algebra",
            UnitOrder::Infinite,
            (true, Flag::Yes, Flag::Yes),
            Knowledge::ibn(),
            None,
            StandardFact,
            "IBN: ranks of free modules over a commutative algebra are invariant. \
             Stable finiteness of commutative unital algebras is a standard fact.",
        ),
        "StablyFinite" => entry(
            id,
            "generic stably finite C*-algebra",
            UnitOrder::Infinite,
            (true, Flag::Yes, Flag::Yes),
            Knowledge::ibn(),
            None,
            Sourced,
            "Stably finite algebras have a totally ordered K0 with [1] an order unit; \
             IBN2 is equivalent to stable finiteness.",
        ),
        "Oinf" => entry(
            id,
            "Cuntz algebra O_inf",
            UnitOrder::Infinite,
            (true, Flag::No, Flag::No),
            Knowledge::ibn(),
            None,
            StandardFact,
            "K0(O_inf) = Z generated by [1], so IBN. Contains proper isometries, so not \
             stably finite. Not IBN1: two of its isometries satisfy the toeplitz2 relations.",
        ),
        "Toeplitz" => entry(
            id,
            "Toeplitz algebra",
            UnitOrder::Infinite,
            (true, Flag::Unknown, Flag::No),
            Knowledge::ibn(),
            None,
            Sourced,
            "Extension of C(T) by the compacts, hence IBN; generated by a non-unitary \
             isometry, hence not stably finite. IBN1 status open.",
        ),
        "BH" => entry(
            id,
            "B(H), H infinite dimensional",
            UnitOrder::Finite(1),
            NON_IBN,
            exact(1, 1),
            None,
            Sourced,
            "K0(B(H)) = 0; Basis Type (1, 1).",
        ),
        "T2" => entry(
            id,
            "T_2: two isometries with orthogonal ranges, v1 v1* + v2 v2* < 1",
            UnitOrder::Infinite,
            (true, Flag::No, Flag::No),
            Knowledge::ibn(),
            Some("toeplitz2".into()),
            Sourced,
            "K0(T_2) = Z generated by [1], so IBN. [v1 v2] is a proper 1x2 isometry, so \
             T_2 ≃ T_2^2 ⊕ X and IBN1 fails.",
        ),
        _ => return None,
    };
    Some(e)
}

const FIXED_IDS: [&str; 6] = [
    "Commutative",
    "StablyFinite",
    "Oinf",
    "Toeplitz",
    "BH",
    "T2",
];

/// Family members shown by [`Catalog::list`].
const LISTED_FAMILY_IDS: [&str; 9] = [
    "O:2", "O:3", "O:4", "Unc:1,2", "Unc:2,3", "Unc:2,5", "Unc:3,6", "Rordam:1", "Rordam:2",
];

fn parse_positive(s: &str) -> Option<u64> {
    match s.parse::<u64>() {
        Ok(v) if v > 0 && !s.starts_with('0') && !s.starts_with('+') => Some(v),
        _ => None,
    }
}

fn family_entry(id: &str) -> Option<CatalogEntry> {
    use ProvenanceLevel::*;
    let (family, params) = id.split_once(':')?;
    match family {
        "O" => {
            let n = parse_positive(params).filter(|&n| n >= 2)?;
            Some(entry(
                id,
                format!("Cuntz algebra O_{n}"),
                UnitOrder::Finite(n - 1),
                NON_IBN,
                exact(1, n - 1),
                Some(format!("cuntz:{n}")),
                Sourced,
                format!(
                    "K0(O_{n}) = Z/{} generated by [1]; Basis Type (1, {}).",
                    n - 1,
                    n - 1
                ),
            ))
        }
        "Unc" => {
            let (m, n) = params.split_once(',')?;
            let (m, n) = (parse_positive(m)?, parse_positive(n)?);
            if n <= m || u32::try_from(n).is_err() {
                return None;
            }
            Some(entry(
                id,
                format!("U^nc_{{{m},{n}}}"),
                UnitOrder::Finite(n - m),
                NON_IBN,
                exact(m, n - m),
                Some(format!("unc:{m},{n}")),
                Sourced,
                format!(
                    "Universal algebra of a {m}x{n} unitary; K0 = Z/{k}; Basis Type ({m}, {k}).",
                    k = n - m
                ),
            ))
        }
        "Rordam" => {
            let n = parse_positive(params)?;
            Some(entry(
                id,
                format!("Rørdam algebra with type ({n}, 1)"),
                UnitOrder::Finite(1),
                NON_IBN,
                exact(n, 1),
                None,
                Sourced,
                format!(
                    "K0 = 0, M_{n}(A) properly infinite while smaller corners are finite; \
                     Basis Type ({n}, 1)."
                ),
            ))
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    entries: Vec<CatalogEntry>,
}

/// Built-in entries plus optional validated user entries.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    user: BTreeMap<String, CatalogEntry>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::default()
    }

    fn builtin_entry(id: &str) -> Option<CatalogEntry> {
        fixed_entry(id).or_else(|| family_entry(id))
    }

    pub fn lookup(&self, id: &str) -> Result<CatalogEntry> {
        Self::builtin_entry(id)
            .or_else(|| self.user.get(id).cloned())
            .ok_or_else(|| Error::NotFound(id.to_string()))
    }

    /// Fixed entries, sample family members, then user entries by id.
    pub fn list(&self) -> Vec<CatalogEntry> {
        FIXED_IDS
            .iter()
            .chain(LISTED_FAMILY_IDS.iter())
            .filter_map(|id| Self::builtin_entry(id))
            .chain(self.user.values().cloned())
            .collect()
    }

    /// Adds a user entry after validation. Built-in ids cannot be shadowed.
    pub fn add(&mut self, mut entry: CatalogEntry) -> Result<()> {
        if Self::builtin_entry(&entry.id).is_some() || self.user.contains_key(&entry.id) {
            return Err(Error::InvalidEntry {
                id: entry.id,
                reason: "id already in use".into(),
            });
        }
        let violations = validate_entry(&entry);
        if !violations.is_empty() {
            let reason = violations
                .iter()
                .map(|v| v.message.as_str())
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Error::InvalidEntry {
                id: entry.id,
                reason,
            });
        }
        entry.provenance_level = ProvenanceLevel::User;
        self.user.insert(entry.id.clone(), entry);
        Ok(())
    }

    /// Loads `{"entries": [...]}` on top of the built-in entries.
    pub fn with_user_json(json: &str) -> Result<Self> {
        let file: CatalogFile = serde_json::from_str(json)?;
        let mut catalog = Self::builtin();
        for e in file.entries {
            // A dump of the built-in catalog is itself a valid input.
            if Self::builtin_entry(&e.id).as_ref() == Some(&e) {
                continue;
            }
            catalog.add(e)?;
        }
        Ok(catalog)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CatalogFile {
            entries: self.list(),
        })
        .expect("catalog serializes")
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.list().iter().flat_map(validate_entry).collect()
    }
}
