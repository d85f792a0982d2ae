use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// A generator symbol: `v<i>` (Cuntz/Toeplitz isometries) or `u<i>_<j>`
/// (entries of a rectangular unitary).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    V(u32),
    U(u32, u32),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::V(i) => write!(f, "v{i}"),
            Generator::U(i, j) => write!(f, "u{i}_{j}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: Generator,
    pub adjoint: bool,
}

impl Letter {
    pub fn new(gen: Generator) -> Self {
        Letter {
            gen,
            adjoint: false,
        }
    }

    pub fn star(self) -> Self {
        Letter {
            adjoint: !self.adjoint,
            ..self
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.gen, if self.adjoint { "'" } else { "" })
    }
}

/// A monomial in the generators and their adjoints; the empty word is `1`.
///
/// Words are ordered by length first, then lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn star(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.star()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// `prefix · middle · suffix`.
    pub(crate) fn splice(prefix: &[Letter], middle: &Word, suffix: &[Letter]) -> Word {
        let mut letters = Vec::with_capacity(prefix.len() + middle.len() + suffix.len());
        letters.extend_from_slice(prefix);
        letters.extend_from_slice(&middle.0);
        letters.extend_from_slice(suffix);
        Word(letters)
    }

    /// Positions where `pattern` occurs as a contiguous subword.
    pub(crate) fn occurrences<'a>(&'a self, pattern: &'a Word) -> impl Iterator<Item = usize> + 'a {
        let n = pattern.len();
        (0..=self.len().saturating_sub(n))
            .filter(move |&i| n <= self.len() && self.0[i..i + n] == pattern.0[..])
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.0.iter().map(|l| l.gen)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Noncommutative polynomial with exact rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NcPoly {
    terms: BTreeMap<Word, BigRational>,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Word::unit())
    }

    pub fn monomial(word: Word) -> Self {
        Self::term(BigRational::one(), word)
    }

    pub fn generator(gen: Generator) -> Self {
        Self::monomial(Word(vec![Letter::new(gen)]))
    }

    pub fn constant(c: i64) -> Self {
        Self::term(BigRational::from_integer(c.into()), Word::unit())
    }

    pub fn term(coeff: BigRational, word: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(word, coeff);
        p
    }

    /// `1` if `i == j`, else `0`.
    pub fn delta<T: PartialEq>(i: T, j: T) -> Self {
        if i == j {
            Self::one()
        } else {
            Self::zero()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &Word) -> Option<&BigRational> {
        self.terms.get(word)
    }

    pub fn add_term(&mut self, word: Word, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NcPoly, coeff: &BigRational) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * coeff);
        }
    }

    pub(crate) fn remove_term(&mut self, word: &Word) -> Option<BigRational> {
        self.terms.remove(word)
    }

    /// Adjoint: reverse each word, flip adjoint flags. Rational coefficients
    /// are self-conjugate.
    pub fn involute(&self) -> NcPoly {
        NcPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.star(), c.clone()))
                .collect(),
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.terms.keys().flat_map(|w| w.generators())
    }

    /// Parses the text syntax: `v1 v2' - 2/3 u1_2 + 1`.
    pub fn parse(src: &str) -> Result<NcPoly> {
        PolyParser { src, pos: 0 }.parse()
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;

    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigRational::one());
        out
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;

    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigRational::one());
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;

    fn neg(self) -> NcPoly {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;

    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                out.add_term(wa.concat(wb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for NcPoly {
            type Output = NcPoly;

            fn $method(self, rhs: NcPoly) -> NcPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (word, coeff)) in self.terms.iter().enumerate() {
            let negative = coeff.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = coeff.abs();
            if word.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{word}")?;
            } else {
                write!(f, "{magnitude} {word}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for NcPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NcPoly::parse(s)
    }
}

struct PolyParser<'a> {
    src: &'a str,
    pos: usize,
}

impl PolyParser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::PolySyntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Result<&str> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(&self.src[start..self.pos])
    }

    fn index(&mut self) -> Result<u32> {
        let at = self.pos;
        let text = self.digits()?;
        match text.parse::<u32>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(Error::PolySyntax {
                offset: at,
                message: format!("generator index `{text}` must be a positive integer"),
            }),
        }
    }

    fn parse(mut self) -> Result<NcPoly> {
        let mut poly = NcPoly::zero();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let mut sign = BigRational::one();
            match self.peek() {
                Some(b'+') => self.pos += 1,
                Some(b'-') => {
                    sign = -sign;
                    self.pos += 1;
                }
                None => break,
                Some(_) if first => {}
                Some(_) => return self.err("expected `+` or `-`"),
            }
            first = false;
            self.skip_ws();
            let (coeff, word) = self.term()?;
            poly.add_term(word, sign * coeff);
        }
        Ok(poly)
    }

    fn term(&mut self) -> Result<(BigRational, Word)> {
        let mut coeff = BigRational::one();
        let mut saw_anything = false;
        if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            let numer: BigInt = self.digits()?.parse().expect("digits");
            let mut value = BigRational::from_integer(numer);
            if self.peek() == Some(b'/') {
                self.pos += 1;
                let at = self.pos;
                let denom: BigInt = self.digits()?.parse().expect("digits");
                if denom.is_zero() {
                    return Err(Error::PolySyntax {
                        offset: at,
                        message: "zero denominator".into(),
                    });
                }
                value /= BigRational::from_integer(denom);
            }
            coeff = value;
            saw_anything = true;
        }
        let mut letters = Vec::new();
        loop {
            self.skip_ws();
            let gen = match self.peek() {
                Some(b'v') => {
                    self.pos += 1;
                    Generator::V(self.index()?)
                }
                Some(b'u') => {
                    self.pos += 1;
                    let i = self.index()?;
                    if self.peek() != Some(b'_') {
                        return self.err("expected `_` in `u<i>_<j>`");
                    }
                    self.pos += 1;
                    Generator::U(i, self.index()?)
                }
                Some(b'+' | b'-') | None => break,
                Some(b) if b.is_ascii_digit() => {
                    return self.err("numeric factor after a generator; coefficients go first")
                }
                Some(_) => return self.err("unexpected character"),
            };
            let mut letter = Letter::new(gen);
            while self.peek() == Some(b'\'') {
                self.pos += 1;
                letter = letter.star();
            }
            letters.push(letter);
            saw_anything = true;
        }
        if !saw_anything {
            return self.err("expected a term");
        }
        Ok((coeff, Word(letters)))
    }
}
