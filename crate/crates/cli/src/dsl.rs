//! Recursive-descent parser for algebra expressions.
//!
//! ```text
//! expr := atom | oplus(expr, expr) | tensor(expr, expr) | quotient(expr)
//!       | hom(expr) | ext(expr) | limit(expr {, expr}) | corner_infinite_simple
//! atom := O(int) | Oinf | Unc(int, int) | Toeplitz | T2 | BH | Commutative
//!       | Rordam(int) | type(int, int) | ibn
//! ```
//!
//! Whitespace is ignored between tokens. Errors carry the byte offset of the
//! offending token. [`AlgebraExpr`]'s `Display` prints this same syntax.

use ibn_core::{AlgebraExpr, BasisType};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("parse error at byte {offset}: expected {}, found {found}", expected.join(" | "))]
    Parse {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("arity error at byte {offset}: {message}")]
    Arity { offset: usize, message: String },
}

impl DslError {
    pub fn offset(&self) -> usize {
        match self {
            DslError::Parse { offset, .. } | DslError::Arity { offset, .. } => *offset,
        }
    }
}

const EXPR_START: &[&str] = &[
    "oplus(",
    "tensor(",
    "quotient(",
    "hom(",
    "ext(",
    "limit(",
    "corner_infinite_simple",
    "O(",
    "Oinf",
    "Unc(",
    "Toeplitz",
    "T2",
    "BH",
    "Commutative",
    "Rordam(",
    "type(",
    "ibn",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Int(&'a str),
    LParen,
    RParen,
    Comma,
    Other(char),
    End,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Int(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Other(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

pub fn parse(src: &str) -> Result<AlgebraExpr, DslError> {
    let mut p = Parser { src, pos: 0 };
    let expr = p.expr()?;
    let (at, tok) = p.next();
    if tok != Tok::End {
        return Err(DslError::Parse {
            offset: at,
            expected: vec!["end of input"],
            found: tok.describe(),
        });
    }
    Ok(expr)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Offset and token at the cursor, without consuming.
    fn peek(&mut self) -> (usize, Tok<'a>) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return (start, Tok::End);
        };
        let word_len = |pred: fn(char) -> bool| {
            rest.char_indices()
                .find(|&(_, ch)| !pred(ch))
                .map_or(rest.len(), |(i, _)| i)
        };
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            c if c.is_ascii_digit() => Tok::Int(&rest[..word_len(|ch| ch.is_ascii_digit())]),
            c if c.is_ascii_alphabetic() || c == '_' => {
                Tok::Ident(&rest[..word_len(|ch| ch.is_ascii_alphanumeric() || ch == '_')])
            }
            c => Tok::Other(c),
        };
        (start, tok)
    }

    fn next(&mut self) -> (usize, Tok<'a>) {
        let (at, tok) = self.peek();
        self.pos = at
            + match tok {
                Tok::Ident(s) | Tok::Int(s) => s.len(),
                Tok::LParen | Tok::RParen | Tok::Comma => 1,
                Tok::Other(c) => c.len_utf8(),
                Tok::End => 0,
            };
        (at, tok)
    }

    fn expect(&mut self, want: Tok<'static>, label: &'static str) -> Result<(), DslError> {
        let (at, tok) = self.next();
        if tok == want {
            Ok(())
        } else {
            Err(DslError::Parse {
                offset: at,
                expected: vec![label],
                found: tok.describe(),
            })
        }
    }

    fn int(&mut self) -> Result<(usize, u64), DslError> {
        let (at, tok) = self.next();
        let Tok::Int(text) = tok else {
            return Err(DslError::Parse {
                offset: at,
                expected: vec!["positive integer"],
                found: tok.describe(),
            });
        };
        match text.parse::<u64>() {
            Ok(0) => Err(DslError::Parse {
                offset: at,
                expected: vec!["positive integer"],
                found: "`0`".into(),
            }),
            Ok(v) => Ok((at, v)),
            Err(_) => Err(DslError::Arity {
                offset: at,
                message: format!("integer `{text}` does not fit in 64 bits"),
            }),
        }
    }

    fn args<const N: usize>(&mut self) -> Result<[(usize, u64); N], DslError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut out = [(0, 0); N];
        for (i, slot) in out.iter_mut().enumerate() {
            if i > 0 {
                self.expect(Tok::Comma, "`,`")?;
            }
            *slot = self.int()?;
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(out)
    }

    fn unary(&mut self) -> Result<AlgebraExpr, DslError> {
        self.expect(Tok::LParen, "`(`")?;
        let e = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(e)
    }

    fn binary(&mut self) -> Result<(AlgebraExpr, AlgebraExpr), DslError> {
        self.expect(Tok::LParen, "`(`")?;
        let a = self.expr()?;
        self.expect(Tok::Comma, "`,`")?;
        let b = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok((a, b))
    }

    fn expr(&mut self) -> Result<AlgebraExpr, DslError> {
        let (at, tok) = self.next();
        let Tok::Ident(name) = tok else {
            return Err(DslError::Parse {
                offset: at,
                expected: EXPR_START.to_vec(),
                found: tok.describe(),
            });
        };
        let arity = |message: String| DslError::Arity {
            offset: at,
            message,
        };
        Ok(match name {
            "oplus" => {
                let (a, b) = self.binary()?;
                AlgebraExpr::direct_sum(a, b)
            }
            "tensor" => {
                let (a, b) = self.binary()?;
                AlgebraExpr::tensor(a, b)
            }
            "quotient" => AlgebraExpr::quotient(self.unary()?),
            "hom" => AlgebraExpr::hom_image(self.unary()?),
            "ext" => AlgebraExpr::extension_of(self.unary()?),
            "limit" => {
                self.expect(Tok::LParen, "`(`")?;
                let mut parts = vec![self.expr()?];
                loop {
                    let (at, tok) = self.next();
                    match tok {
                        Tok::Comma => parts.push(self.expr()?),
                        Tok::RParen => break,
                        other => {
                            return Err(DslError::Parse {
                                offset: at,
                                expected: vec!["`,`", "`)`"],
                                found: other.describe(),
                            })
                        }
                    }
                }
                AlgebraExpr::InductiveLimit(parts)
            }
            "corner_infinite_simple" => AlgebraExpr::CornerOfInfiniteSimple,
            "O" => {
                let [(_, n)] = self.args()?;
                if n < 2 || n > u64::from(u32::MAX) {
                    return Err(arity(format!("O(n) needs 2 <= n < 2^32, got {n}")));
                }
                AlgebraExpr::leaf(format!("O:{n}"))
            }
            "Unc" => {
                let [(_, m), (_, n)] = self.args()?;
                if n <= m {
                    return Err(arity(format!("Unc(m,n) needs n > m, got m={m}, n={n}")));
                }
                if n > u64::from(u32::MAX) {
                    return Err(arity(format!("Unc(m,n) needs n < 2^32, got {n}")));
                }
                AlgebraExpr::leaf(format!("Unc:{m},{n}"))
            }
            "Rordam" => {
                let [(_, n)] = self.args()?;
                AlgebraExpr::leaf(format!("Rordam:{n}"))
            }
            "type" => {
                let [(_, n), (_, k)] = self.args()?;
                AlgebraExpr::ExactLeaf(BasisType::new(n, k).expect("parsed integers are positive"))
            }
            "ibn" => AlgebraExpr::IbnLeaf,
            "Oinf" | "Toeplitz" | "T2" | "BH" | "Commutative" => AlgebraExpr::leaf(name),
            _ => {
                return Err(DslError::Parse {
                    offset: at,
                    expected: EXPR_START.to_vec(),
                    found: tok.describe(),
                })
            }
        })
    }
}
