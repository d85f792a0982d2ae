use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;

use super::poly::{Generator, Letter, NcPoly, Word};
use crate::{Error, Result};

/// Rule budget used when no explicit bound is given.
pub const DEFAULT_STEP_BOUND: usize = 10_000;

/// `lhs -> rhs`, with `lhs` strictly longer than every word of `rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialRule {
    pub lhs: Word,
    pub rhs: NcPoly,
}

/// `Σ terms -> rhs`, applied inside a shared left/right context. Every term of
/// the sum has coefficient one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionRule {
    pub terms: Vec<Word>,
    pub rhs: NcPoly,
}

/// Finitely presented *-algebra as a set of rewrite rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    id: String,
    generators: Vec<Generator>,
    monomial_rules: Vec<MonomialRule>,
    contractions: Vec<ContractionRule>,
}

/// Step budget exhausted before reaching a normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconclusive {
    pub partial: NcPoly,
    pub steps: usize,
}

impl fmt::Display for Inconclusive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step bound exhausted after {} rule applications",
            self.steps
        )
    }
}

fn word(letters: impl IntoIterator<Item = Letter>) -> Word {
    Word::from_letters(letters.into_iter().collect())
}

fn g(gen: Generator) -> Letter {
    Letter::new(gen)
}

fn isometry_rules(n: u32) -> Vec<MonomialRule> {
    let mut rules = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            rules.push(MonomialRule {
                lhs: word([g(Generator::V(i)).star(), g(Generator::V(j))]),
                rhs: NcPoly::delta(i, j),
            });
        }
    }
    rules
}

impl Presentation {
    /// Builds a custom presentation, checking that monomial rules shrink words.
    pub fn new(
        id: impl Into<String>,
        generators: Vec<Generator>,
        monomial_rules: Vec<MonomialRule>,
        contractions: Vec<ContractionRule>,
    ) -> Result<Self> {
        let id = id.into();
        for rule in &monomial_rules {
            if rule.rhs.terms().any(|(w, _)| w.len() >= rule.lhs.len()) {
                return Err(Error::BadPresentation(format!(
                    "{id}: rule `{} -> {}` is not length-decreasing",
                    rule.lhs, rule.rhs
                )));
            }
        }
        if contractions.iter().any(|c| c.terms.is_empty()) {
            return Err(Error::BadPresentation(format!("{id}: empty contraction")));
        }
        Ok(Presentation {
            id,
            generators,
            monomial_rules,
            contractions,
        })
    }

    /// Cuntz algebra: `v_i* v_j = δ_ij` and `Σ v_i v_i* = 1`.
    pub fn cuntz(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadPresentation(format!("cuntz:{n} needs n >= 2")));
        }
        let completeness = ContractionRule {
            terms: (1..=n)
                .map(|i| word([g(Generator::V(i)), g(Generator::V(i)).star()]))
                .collect(),
            rhs: NcPoly::one(),
        };
        Self::new(
            format!("cuntz:{n}"),
            (1..=n).map(Generator::V).collect(),
            isometry_rules(n),
            vec![completeness],
        )
    }

    /// Two isometries with orthogonal ranges and no completeness relation.
    pub fn toeplitz2() -> Self {
        Self::new(
            "toeplitz2",
            vec![Generator::V(1), Generator::V(2)],
            isometry_rules(2),
            Vec::new(),
        )
        .expect("isometry rules are length-decreasing")
    }

    /// Entries of an `m x n` unitary: `U U* = I_m` and `U* U = I_n`.
    pub fn unc(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n <= m {
            return Err(Error::BadPresentation(format!(
                "unc:{m},{n} needs n > m >= 1"
            )));
        }
        let u = |i, j| g(Generator::U(i, j));
        let mut contractions = Vec::new();
        for i in 1..=m {
            for j in 1..=m {
                contractions.push(ContractionRule {
                    terms: (1..=n).map(|k| word([u(i, k), u(j, k).star()])).collect(),
                    rhs: NcPoly::delta(i, j),
                });
            }
        }
        for i in 1..=n {
            for j in 1..=n {
                contractions.push(ContractionRule {
                    terms: (1..=m).map(|k| word([u(k, i).star(), u(k, j)])).collect(),
                    rhs: NcPoly::delta(i, j),
                });
            }
        }
        let generators = (1..=m)
            .flat_map(|i| (1..=n).map(move |j| Generator::U(i, j)))
            .collect();
        Self::new(format!("unc:{m},{n}"), generators, Vec::new(), contractions)
    }

    /// Resolves `cuntz:n`, `unc:m,n` or `toeplitz2`.
    pub fn from_id(id: &str) -> Result<Self> {
        let bad = || Error::BadPresentation(id.to_string());
        let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
        match id.split_once(':') {
            None if id == "toeplitz2" => Ok(Self::toeplitz2()),
            Some(("cuntz", n)) => Self::cuntz(num(n)?),
            Some(("unc", mn)) => {
                let (m, n) = mn.split_once(',').ok_or_else(bad)?;
                Self::unc(num(m)?, num(n)?)
            }
            _ => Err(bad()),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn monomial_rules(&self) -> &[MonomialRule] {
        &self.monomial_rules
    }

    pub fn contractions(&self) -> &[ContractionRule] {
        &self.contractions
    }

    /// Rejects polynomials mentioning generators outside the presentation.
    pub fn check_generators(&self, p: &NcPoly) -> Result<()> {
        match p.generators().find(|gen| !self.generators.contains(gen)) {
            Some(gen) => Err(Error::UnknownGenerator(gen.to_string())),
            None => Ok(()),
        }
    }

    /// The adjoint of every rule is again a rule of the set (up to term order).
    pub fn is_involution_closed(&self) -> bool {
        let monomials: BTreeSet<(Word, String)> = self
            .monomial_rules
            .iter()
            .map(|r| (r.lhs.clone(), r.rhs.to_string()))
            .collect();
        let sums: BTreeSet<(Vec<Word>, String)> = self
            .contractions
            .iter()
            .map(|c| (sorted(c.terms.clone()), c.rhs.to_string()))
            .collect();
        self.monomial_rules
            .iter()
            .all(|r| monomials.contains(&(r.lhs.star(), r.rhs.involute().to_string())))
            && self.contractions.iter().all(|c| {
                let terms = sorted(c.terms.iter().map(Word::star).collect());
                sums.contains(&(terms, c.rhs.involute().to_string()))
            })
    }

    /// Rewrites `p` towards a normal form: monomial rules to fixpoint, then a
    /// single sum contraction, repeated until nothing applies.
    ///
    /// The strategy is deterministic (leftmost match, rules in index order)
    /// but rewriting is not complete: a non-zero normal form does not prove
    /// the element non-zero in the algebra.
    pub fn normalize(
        &self,
        p: &NcPoly,
        step_bound: usize,
    ) -> std::result::Result<NcPoly, Inconclusive> {
        let mut steps = 0usize;
        let mut current = p.clone();
        loop {
            current = self.monomial_pass(current, &mut steps, step_bound)?;
            if !self.contract_once(&mut current) {
                return Ok(current);
            }
            steps += 1;
            if steps > step_bound {
                return Err(Inconclusive {
                    partial: current,
                    steps,
                });
            }
        }
    }

    fn first_monomial_match(&self, w: &Word) -> Option<(usize, &MonomialRule)> {
        (0..w.len()).find_map(|pos| {
            self.monomial_rules.iter().find_map(|rule| {
                let n = rule.lhs.len();
                (pos + n <= w.len() && w.letters()[pos..pos + n] == *rule.lhs.letters())
                    .then_some((pos, rule))
            })
        })
    }

    fn monomial_pass(
        &self,
        p: NcPoly,
        steps: &mut usize,
        step_bound: usize,
    ) -> std::result::Result<NcPoly, Inconclusive> {
        if self.monomial_rules.is_empty() {
            return Ok(p);
        }
        let mut done = NcPoly::zero();
        let mut work: Vec<(Word, BigRational)> =
            p.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        while let Some((w, c)) = work.pop() {
            match self.first_monomial_match(&w) {
                None => done.add_term(w, c),
                Some((pos, rule)) => {
                    *steps += 1;
                    if *steps > step_bound {
                        let mut partial = done;
                        partial.add_term(w, c);
                        for (w, c) in work {
                            partial.add_term(w, c);
                        }
                        return Err(Inconclusive {
                            partial,
                            steps: *steps,
                        });
                    }
                    let (prefix, rest) = w.letters().split_at(pos);
                    let suffix = &rest[rule.lhs.len()..];
                    for (rw, rc) in rule.rhs.terms() {
                        work.push((Word::splice(prefix, rw, suffix), &c * rc));
                    }
                }
            }
        }
        Ok(done)
    }

    /// Applies the first matching contraction. Returns whether one applied.
    fn contract_once(&self, p: &mut NcPoly) -> bool {
        for rule in &self.contractions {
            let (head, tail) = rule.terms.split_first().expect("non-empty contraction");
            let found = p.terms().find_map(|(w, c)| {
                w.occurrences(head).find_map(|pos| {
                    let prefix = &w.letters()[..pos];
                    let suffix = &w.letters()[pos + head.len()..];
                    let all_present = tail
                        .iter()
                        .all(|t| p.coefficient(&Word::splice(prefix, t, suffix)) == Some(c));
                    all_present.then(|| (prefix.to_vec(), suffix.to_vec(), c.clone()))
                })
            });
            if let Some((prefix, suffix, c)) = found {
                for t in &rule.terms {
                    p.remove_term(&Word::splice(&prefix, t, &suffix));
                }
                for (rw, rc) in rule.rhs.terms() {
                    p.add_term(Word::splice(&prefix, rw, &suffix), &c * rc);
                }
                return true;
            }
        }
        false
    }
}

fn sorted(mut words: Vec<Word>) -> Vec<Word> {
    words.sort();
    words
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}
