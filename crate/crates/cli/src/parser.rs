//! Expression parser for the set language:
//!
//! ```text
//! element  := '0' | sterm (('+'|'-') sterm)*
//! sterm    := rational ('*' mono)? | mono
//! mono     := 't' '^' int                      (n = 2)
//!           | 't2' '^' int ('*'? 't3' '^' int ...)?   (n >= 3)
//! rational := int ('/' int)?
//! dset     := '[' element ']' '+' 'p' '^' int tpart 'O'
//! rank1    := '[' element ']' '+' 't' '^' int 'OO'     (n = 2)
//! set      := 'empty' | dset | rank1
//!           | 'union' '(' set (',' set)* ')'
//!           | 'diff' '(' set (',' dset)+ ')'
//! ```
//!
//! Errors carry the byte position and what was expected there. The printer
//! in `levelset_core` (the `Display` impls) is the inverse of this parser.

use levelset_core::hlf::{DistinguishedSet, FieldElement, FieldShape, IdealIndex};
use levelset_core::setalg::{RankOneCoset, SymbolicSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: expected {}, found {}",
            self.pos, self.expected, self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Caret,
    Plus,
    Minus,
    Star,
    Slash,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(v) => write!(f, "integer {v}"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::LBracket => write!(f, "'['"),
            Tok::RBracket => write!(f, "']'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Comma => write!(f, "','"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '[' => {
                out.push((i, Tok::LBracket));
                i += 1;
            }
            ']' => {
                out.push((i, Tok::RBracket));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            ',' => {
                out.push((i, Tok::Comma));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: i64 = text[start..i].parse().map_err(|_| ParseError {
                    pos: start,
                    expected: "an integer".into(),
                    found: text[start..i].to_string(),
                })?;
                out.push((start, Tok::Int(v)));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            other => {
                return Err(ParseError {
                    pos: i,
                    expected: "a token".into(),
                    found: format!("'{other}'"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    shape: FieldShape,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, expected: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.here(),
            expected: expected.into(),
            found: self
                .peek()
                .map(|t| t.to_string())
                .unwrap_or_else(|| "end of input".into()),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(what)
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == name => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("'{name}'")),
        }
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(v)) => {
                if v > 1 << 20 {
                    self.pos -= 1;
                    return self.err("an integer within desk scale (|v| <= 2^20)");
                }
                Ok(if negative { -v } else { v })
            }
            _ => {
                self.pos -= 1;
                self.err("an integer")
            }
        }
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let num = self.signed_int()?;
        let den = if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            let d = self.signed_int()?;
            if d == 0 {
                return Err(ParseError {
                    pos: self.here(),
                    expected: "a nonzero denominator".into(),
                    found: "0".into(),
                });
            }
            d
        } else {
            1
        };
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `t^k` (n = 2) or a product of `tj^k` factors (n >= 3). Missing
    /// variables have exponent 0.
    fn monomial(&mut self) -> Result<Vec<i64>, ParseError> {
        let mut exps = vec![0i64; self.shape.tdim()];
        let mut seen = false;
        loop {
            let name = match self.peek() {
                Some(Tok::Ident(s)) if is_t_var(s, self.shape) => s.clone(),
                _ => break,
            };
            self.pos += 1;
            self.expect(&Tok::Caret, "'^'")?;
            let k = self.signed_int()?;
            let slot = t_slot(&name, self.shape);
            exps[slot] = k;
            seen = true;
            // optional '*' between variables
            if self.peek() == Some(&Tok::Star)
                && matches!(self.toks.get(self.pos + 1), Some((_, Tok::Ident(s))) if is_t_var(s, self.shape))
            {
                self.pos += 1;
            }
        }
        if !seen {
            return self.err("a t-variable");
        }
        Ok(exps)
    }

    fn element(&mut self) -> Result<FieldElement, ParseError> {
        let mut terms: Vec<(Vec<i64>, BigRational)> = Vec::new();
        let mut sign = BigRational::from_integer(1.into());
        loop {
            // one term: rational, rational * mono, or bare mono
            let (exp, coeff) = match self.peek() {
                Some(Tok::Ident(s)) if is_t_var(s, self.shape) => {
                    (self.monomial()?, BigRational::from_integer(1.into()))
                }
                Some(Tok::Int(_)) | Some(Tok::Minus) => {
                    let c = self.rational()?;
                    if self.peek() == Some(&Tok::Star) {
                        self.pos += 1;
                        (self.monomial()?, c)
                    } else {
                        (vec![0; self.shape.tdim()], c)
                    }
                }
                _ => return self.err("a coefficient or a t-variable"),
            };
            terms.push((exp, &sign * coeff));
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    sign = BigRational::from_integer(1.into());
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    sign = BigRational::from_integer((-1).into());
                }
                _ => break,
            }
        }
        FieldElement::from_terms(self.shape, terms).map_err(|e| ParseError {
            pos: self.here(),
            expected: "a well-formed element".into(),
            found: e.to_string(),
        })
    }

    /// The part after `[element] +`: either `p^i <tpart> O` or `t^j OO`.
    fn coset_tail(&mut self, alpha: FieldElement) -> Result<SymbolicSet, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "p" => {
                self.pos += 1;
                self.expect(&Tok::Caret, "'^'")?;
                let i1 = self.signed_int()?;
                let tail = self.monomial()?;
                self.expect_ident("O")?;
                let d = DistinguishedSet::new(self.shape, alpha, IdealIndex::new(i1, tail))
                    .map_err(|e| ParseError {
                        pos: self.here(),
                        expected: "a valid coset".into(),
                        found: e.to_string(),
                    })?;
                Ok(SymbolicSet::Dist(d))
            }
            Some(Tok::Ident(s)) if is_t_var(s, self.shape) => {
                let exps = self.monomial()?;
                self.expect_ident("OO")?;
                if self.shape.n != 2 {
                    return Err(ParseError {
                        pos: self.here(),
                        expected: "rank-one cosets only exist for n = 2".into(),
                        found: format!("field with n = {}", self.shape.n),
                    });
                }
                let r = RankOneCoset::new(self.shape, alpha, exps[0]).map_err(|e| ParseError {
                    pos: self.here(),
                    expected: "a valid rank-one coset".into(),
                    found: e.to_string(),
                })?;
                Ok(SymbolicSet::RankOne(r))
            }
            _ => self.err("'p' or a t-variable"),
        }
    }

    fn coset(&mut self) -> Result<SymbolicSet, ParseError> {
        self.expect(&Tok::LBracket, "'['")?;
        let alpha = if self.peek() == Some(&Tok::RBracket) {
            FieldElement::zero(self.shape)
        } else {
            self.element()?
        };
        self.expect(&Tok::RBracket, "']'")?;
        self.expect(&Tok::Plus, "'+'")?;
        self.coset_tail(alpha)
    }

    fn set(&mut self) -> Result<SymbolicSet, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "empty" => {
                self.pos += 1;
                Ok(SymbolicSet::Empty)
            }
            Some(Tok::Ident(s)) if s == "union" => {
                self.pos += 1;
                self.expect(&Tok::LParen, "'('")?;
                let mut members = vec![self.set()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    members.push(self.set()?);
                }
                self.expect(&Tok::RParen, "')'")?;
                Ok(SymbolicSet::Union(members))
            }
            Some(Tok::Ident(s)) if s == "diff" => {
                self.pos += 1;
                self.expect(&Tok::LParen, "'('")?;
                let base = self.set()?;
                let mut holes = Vec::new();
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    match self.coset()? {
                        SymbolicSet::Dist(d) => holes.push(d),
                        other => {
                            return Err(ParseError {
                                pos: self.here(),
                                expected: "a distinguished-set hole".into(),
                                found: other.to_string(),
                            })
                        }
                    }
                }
                self.expect(&Tok::RParen, "')'")?;
                if holes.is_empty() {
                    return self.err("at least one hole after the base");
                }
                Ok(SymbolicSet::difference(base, holes))
            }
            Some(Tok::LBracket) => self.coset(),
            _ => self.err("'empty', 'union', 'diff' or '['"),
        }
    }
}

fn is_t_var(name: &str, shape: FieldShape) -> bool {
    if shape.n == 2 {
        name == "t" || name == "t2"
    } else {
        name.strip_prefix('t')
            .and_then(|d| d.parse::<u8>().ok())
            .is_some_and(|d| d >= 2 && d <= shape.n)
    }
}

fn t_slot(name: &str, shape: FieldShape) -> usize {
    if name == "t" {
        0
    } else {
        let d: u8 = name[1..].parse().expect("validated by is_t_var");
        let _ = shape;
        (d - 2) as usize
    }
}

fn parse_with<T>(
    text: &str,
    shape: FieldShape,
    f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        shape,
    };
    let value = f(&mut p)?;
    if p.pos != p.toks.len() {
        return p.err("end of input");
    }
    Ok(value)
}

/// Parses a symbolic set expression.
pub fn parse_set(text: &str, shape: FieldShape) -> Result<SymbolicSet, ParseError> {
    parse_with(text, shape, Parser::set)
}

/// Parses a bare distinguished set (rejects everything else).
pub fn parse_dset(text: &str, shape: FieldShape) -> Result<DistinguishedSet, ParseError> {
    match parse_with(text, shape, Parser::set)? {
        SymbolicSet::Dist(d) => Ok(d),
        other => Err(ParseError {
            pos: 0,
            expected: "a distinguished set".into(),
            found: other.to_string(),
        }),
    }
}

/// Parses a bare field element.
#[cfg_attr(not(test), allow(dead_code))]
pub fn parse_element(text: &str, shape: FieldShape) -> Result<FieldElement, ParseError> {
    parse_with(text, shape, |p| {
        if p.peek() == Some(&Tok::Int(0)) && p.toks.len() == 1 {
            p.pos += 1;
            return Ok(FieldElement::zero(p.shape));
        }
        p.element()
    })
}
