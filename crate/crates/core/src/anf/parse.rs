//! Text grammars.
//!
//! * ANF, array-of-arrays: `[1,[1],[3],[1,2]]` is `1 + x1 + x3 + x1*x2`. The
//!   constant monomial is written `1` or `[]`; `[]` on its own is the zero
//!   function. Whitespace is allowed between tokens.
//! * Terms, signed tuples: `(1,2,-3,4)` is `x1 x2 x3' x4`; `()` is the
//!   tautology.
//! * ANF, plain text: `1 + x1 + x2*x3`. `+` and `^` both denote XOR.

use std::str::FromStr;

use super::poly::{AnfPoly, Monomial, Var};
use super::term::{Literal, Term};
use super::AnfError;

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> AnfError {
        AnfError::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), AnfError> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(self.err(format!("expected '{}', found '{}'", c as char, b as char))),
            None => Err(self.err(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Parses an optionally signed decimal integer, returning it with its start position.
    fn integer(&mut self) -> Result<(i64, usize), AnfError> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits == self.pos {
            self.pos = start;
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value = text.parse::<i64>().map_err(|_| AnfError::Parse {
            position: start,
            message: format!("integer '{text}' out of range"),
        })?;
        Ok((value, start))
    }

    fn finish(&mut self) -> Result<(), AnfError> {
        match self.peek() {
            None => Ok(()),
            Some(b) => Err(self.err(format!("unexpected trailing '{}'", b as char))),
        }
    }
}

fn var_at(value: i64, position: usize) -> Result<Var, AnfError> {
    u32::try_from(value)
        .ok()
        .and_then(Var::try_new)
        .ok_or_else(|| AnfError::Parse {
            position,
            message: format!("variable index must be positive, got {value}"),
        })
}

/// Parses the array-of-arrays ANF notation.
pub fn parse_anf(text: &str) -> Result<AnfPoly, AnfError> {
    let mut cur = Cursor::new(text);
    cur.expect(b'[')?;
    let mut poly = AnfPoly::zero();
    if !cur.eat(b']') {
        loop {
            match cur.peek() {
                Some(b'[') => {
                    cur.pos += 1;
                    let mut vars = Vec::new();
                    if !cur.eat(b']') {
                        loop {
                            let (k, at) = cur.integer()?;
                            let v = var_at(k, at)?;
                            if vars.contains(&v) {
                                return Err(AnfError::Parse {
                                    position: at,
                                    message: format!("index {k} repeated within a monomial"),
                                });
                            }
                            vars.push(v);
                            if cur.eat(b']') {
                                break;
                            }
                            cur.expect(b',')?;
                        }
                    }
                    poly.toggle(Monomial::from_vars(vars).expect("checked for repeats"));
                }
                Some(_) => {
                    let (k, at) = cur.integer()?;
                    if k != 1 {
                        return Err(AnfError::Parse {
                            position: at,
                            message: format!("bare constant must be 1, got {k}"),
                        });
                    }
                    poly.toggle(Monomial::one());
                }
                None => return Err(cur.err("unterminated array")),
            }
            if cur.eat(b']') {
                break;
            }
            cur.expect(b',')?;
        }
    }
    cur.finish()?;
    Ok(poly)
}

/// Parses the signed-tuple term notation.
pub fn parse_term(text: &str) -> Result<Term, AnfError> {
    let mut cur = Cursor::new(text);
    cur.expect(b'(')?;
    let mut lits: Vec<Literal> = Vec::new();
    if !cur.eat(b')') {
        loop {
            let (k, at) = cur.integer()?;
            if k == 0 {
                return Err(AnfError::Parse {
                    position: at,
                    message: "0 is not a literal".into(),
                });
            }
            let lit = Literal::from_signed(k).ok_or_else(|| AnfError::Parse {
                position: at,
                message: format!("literal {k} out of range"),
            })?;
            if lits.iter().any(|l| l.var == lit.var) {
                return Err(AnfError::Parse {
                    position: at,
                    message: format!("variable {} repeated in term", lit.var.index()),
                });
            }
            lits.push(lit);
            if cur.eat(b')') {
                break;
            }
            cur.expect(b',')?;
        }
    }
    cur.finish()?;
    Ok(Term::from_literals(lits).expect("checked for repeats"))
}

/// Parses the plain-text ANF form, e.g. `1 + x1 + x2*x3`.
pub fn parse_anf_text(text: &str) -> Result<AnfPoly, AnfError> {
    let mut cur = Cursor::new(text);
    let mut poly = AnfPoly::zero();
    loop {
        let mut vars: Vec<Var> = Vec::new();
        let mut zero = false;
        loop {
            match cur.peek() {
                Some(b'x') | Some(b'X') => {
                    cur.pos += 1;
                    let (k, at) = cur.integer()?;
                    let v = var_at(k, at)?;
                    if vars.contains(&v) {
                        return Err(AnfError::Parse {
                            position: at,
                            message: format!("x{k} repeated within a monomial"),
                        });
                    }
                    vars.push(v);
                }
                Some(b'0') | Some(b'1') => {
                    let (k, at) = cur.integer()?;
                    match k {
                        0 => zero = true,
                        1 => {}
                        _ => {
                            return Err(AnfError::Parse {
                                position: at,
                                message: format!("constant must be 0 or 1, got {k}"),
                            })
                        }
                    }
                }
                Some(b) => return Err(cur.err(format!("expected a variable or constant, found '{}'", b as char))),
                None => return Err(cur.err("expected a variable or constant")),
            }
            if !cur.eat(b'*') {
                break;
            }
        }
        if !zero {
            poly.toggle(Monomial::from_vars(vars).expect("checked for repeats"));
        }
        if !(cur.eat(b'+') || cur.eat(b'^')) {
            break;
        }
    }
    cur.finish()?;
    Ok(poly)
}

/// Renders a polynomial in the plain-text form accepted by [`parse_anf_text`].
pub fn to_anf_text(poly: &AnfPoly) -> String {
    if poly.is_zero() {
        return "0".into();
    }
    poly.monomials()
        .map(|m| {
            if m.is_one() {
                "1".to_string()
            } else {
                m.vars()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("*")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl FromStr for AnfPoly {
    type Err = AnfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_anf(s)
    }
}

impl FromStr for Term {
    type Err = AnfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}
