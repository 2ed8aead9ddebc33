//! Small polynomial expressions in the tower generators `t` and `pi`, used by
//! subfield markers (for example `(1+pi) - (1+pi)^3` for `zeta_8 + zeta_8^7`).

use std::sync::Arc;

use crate::error::{Error, Result};

use super::element::{FieldElement, Ring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    T,
    Pi,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut parser = Parser { tokens, pos: 0 };
        let e = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Parse(format!("trailing input in `{src}`")));
        }
        Ok(e)
    }

    /// Evaluates with the given values for `t` and `pi`.
    pub fn eval(&self, ring: &Arc<Ring>, t: &FieldElement, pi: &FieldElement) -> FieldElement {
        match self {
            Expr::Int(n) => FieldElement::from_int(ring, *n),
            Expr::T => t.clone(),
            Expr::Pi => pi.clone(),
            Expr::Add(a, b) => &a.eval(ring, t, pi) + &b.eval(ring, t, pi),
            Expr::Sub(a, b) => &a.eval(ring, t, pi) - &b.eval(ring, t, pi),
            Expr::Mul(a, b) => &a.eval(ring, t, pi) * &b.eval(ring, t, pi),
            Expr::Neg(a) => -&a.eval(ring, t, pi),
            Expr::Pow(a, k) => a.eval(ring, t, pi).pow(*k as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(format!("bad integer `{s}`")))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{src}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_sym(&self, c: char) -> bool {
        matches!(self.tokens.get(self.pos), Some(Tok::Sym(s)) if *s == c)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.peek_sym('+') {
                self.pos += 1;
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.peek_sym('-') {
                self.pos += 1;
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek_sym('*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek_sym('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek_sym('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some(Tok::Num(k)) if *k >= 0 => {
                    let k = *k as u32;
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(base), k));
                }
                _ => return Err(Error::Parse("exponent must be a non-negative integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => Ok(Expr::Int(n)),
            Some(Tok::Ident(s)) if s == "t" => Ok(Expr::T),
            Some(Tok::Ident(s)) if s == "pi" => Ok(Expr::Pi),
            Some(Tok::Sym('(')) => {
                let e = self.expr()?;
                if !self.peek_sym(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_precedence() {
        let e = Expr::parse("1 + 2*t^2 - -pi").unwrap();
        assert_eq!(
            e,
            Expr::Sub(
                Box::new(Expr::Add(
                    Box::new(Expr::Int(1)),
                    Box::new(Expr::Mul(Box::new(Expr::Int(2)), Box::new(Expr::Pow(Box::new(Expr::T), 2))))
                )),
                Box::new(Expr::Neg(Box::new(Expr::Pi)))
            )
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(Expr::parse("t + $").is_err());
        assert!(Expr::parse("(t + 1").is_err());
        assert!(Expr::parse("t^pi").is_err());
        assert!(Expr::parse("x").is_err());
    }
}
