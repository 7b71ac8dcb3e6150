//! Polynomial expressions in `X` with coefficients in ℚ(s).
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' INTEGER)?
//! atom   := INTEGER | 'X' | 's' | '(' expr ')'
//! ```
//!
//! Division is only by expressions free of `X`. Whitespace, including
//! newlines, is ignored.

use cfquad_core::arith::{Field, Poly, Rat, RatFunc};
use cfquad_core::funcfield::specialize_poly;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

pub const GRAMMAR: &str = "\
expr   := term (('+' | '-') term)*
term   := unary (('*' | '/') unary)*
unary  := ('+' | '-') unary | power
power  := atom ('^' INTEGER)?
atom   := INTEGER | 'X' | 's' | '(' expr ')'
(division only by X-free expressions; exponents are nonnegative integers)";

/// Largest accepted exponent.
pub const MAX_EXPONENT: u32 = 1_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected {
        expected: &'static str,
        found: String,
    },
    #[error("unknown identifier `{0}` (only X and s are allowed)")]
    UnknownIdentifier(String),
    #[error("negative exponent")]
    NegativeExponent,
    #[error("exponent exceeds {MAX_EXPONENT}")]
    ExponentTooLarge,
    #[error("division by an expression containing X")]
    NonConstantDivisor,
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

/// A parsed expression together with its source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyExpr {
    pub source: String,
    pub poly: Poly<RatFunc>,
}

impl PolyExpr {
    pub fn uses_parameter(&self) -> bool {
        self.poly.coeffs().iter().any(|c| c.as_rat().is_none())
    }

    /// The polynomial over ℚ when `s` does not occur.
    pub fn to_rational(&self) -> Option<Poly<Rat>> {
        self.poly
            .map_coeffs(|c| c.as_rat().ok_or(cfquad_core::Error::ZeroDenominator))
            .ok()
    }

    pub fn specialize(&self, s: &Rat) -> cfquad_core::Result<Poly<Rat>> {
        specialize_poly(&self.poly, s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                bump(&mut chars);
            }
            Tok::Num(s.parse().expect("digits"))
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                bump(&mut chars);
            }
            Tok::Ident(s)
        } else if "+-*/^()".contains(c) {
            bump(&mut chars);
            Tok::Sym(c)
        } else {
            return Err(ParseError {
                line: l,
                column: col,
                kind: ParseErrorKind::UnexpectedChar(c),
            });
        };
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type P = Poly<RatFunc>;

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(at: &Spanned, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: at.line,
            column: at.column,
            kind,
        }
    }

    fn unexpected(at: &Spanned, expected: &'static str) -> ParseError {
        Self::err(
            at,
            ParseErrorKind::Unexpected {
                expected,
                found: at.tok.describe(),
            },
        )
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<P, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<P, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek().tok == Tok::Sym('/') {
                let at = self.next();
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Self::err(&at, ParseErrorKind::DivisionByZero));
                }
                if !d.is_constant() {
                    return Err(Self::err(&at, ParseErrorKind::NonConstantDivisor));
                }
                let inv = d
                    .coeff(0)
                    .inv()
                    .ok_or_else(|| Self::err(&at, ParseErrorKind::DivisionByZero))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<P, ParseError> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<P, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.next();
        match &at.tok {
            Tok::Num(n) => {
                let e = n
                    .to_u32()
                    .filter(|&e| e <= MAX_EXPONENT)
                    .ok_or_else(|| Self::err(&at, ParseErrorKind::ExponentTooLarge))?;
                Ok(base.pow(e))
            }
            Tok::Sym('-') => Err(Self::err(&at, ParseErrorKind::NegativeExponent)),
            _ => Err(Self::unexpected(&at, "a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<P, ParseError> {
        let at = self.next();
        match at.tok {
            Tok::Num(n) => Ok(Poly::constant(RatFunc::from_rat(Rat::from_integer(n)))),
            Tok::Ident(ref id) if id == "X" => Ok(Poly::x()),
            Tok::Ident(ref id) if id == "s" => Ok(Poly::constant(RatFunc::var())),
            Tok::Ident(ref id) => Err(Self::err(
                &at,
                ParseErrorKind::UnknownIdentifier(id.clone()),
            )),
            Tok::Sym('(') => {
                let inner = self.expr()?;
                let close = self.next();
                if close.tok != Tok::Sym(')') {
                    return Err(Self::unexpected(&close, "`)`"));
                }
                Ok(inner)
            }
            _ => Err(Self::unexpected(&at, "a number, X, s or `(`")),
        }
    }
}

pub fn parse_poly(text: &str) -> Result<PolyExpr, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let poly = p.expr()?;
    let end = p.next();
    if end.tok != Tok::End {
        return Err(Parser::unexpected(&end, "an operator or end of input"));
    }
    Ok(PolyExpr {
        source: text.to_string(),
        poly,
    })
}
