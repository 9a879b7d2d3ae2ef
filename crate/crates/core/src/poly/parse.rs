//! Expression grammar shared by polynomial literals and enveloping-algebra
//! words.
//!
//! ```text
//! expr   := ['-'|'+'] term (('+'|'-') term)*
//! term   := factor (('*'|'·') factor)*
//! factor := int ['/' int] | ident ['^' int] | '(' expr ')' ['^' int]
//! ```
//!
//! Identifiers are `t`, `x<k>`, `xi<k>` and generator tokens `e<k>`.

use num_bigint::BigInt;
use num_traits::One;

use super::{Poly, Rational, Var};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    Number(Rational),
    Var(Var, u32),
    /// Zero-based generator index and power.
    Gen(usize, u32),
    Group(Expr, u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub sign: Rational,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

impl Expr {
    /// Evaluates as a commutative polynomial; generator tokens are rejected.
    pub fn to_poly(&self) -> Result<Poly, Error> {
        let mut out = Poly::zero();
        for term in &self.terms {
            let mut acc = Poly::constant(term.sign.clone());
            for f in &term.factors {
                acc = &acc * &f.to_poly()?;
            }
            out += &acc;
        }
        Ok(out)
    }

    pub fn mentions_generators(&self) -> bool {
        self.terms
            .iter()
            .flat_map(|t| &t.factors)
            .any(Factor::mentions_generators)
    }
}

impl Factor {
    pub fn to_poly(&self) -> Result<Poly, Error> {
        match self {
            Factor::Number(c) => Ok(Poly::constant(c.clone())),
            Factor::Var(v, e) => Ok(Poly::var(*v).pow(*e)),
            Factor::Gen(i, _) => Err(Error::Parse(format!(
                "generator e{} not allowed in a polynomial",
                i + 1
            ))),
            Factor::Group(inner, e) => Ok(inner.to_poly()?.pow(*e)),
        }
    }

    pub fn mentions_generators(&self) -> bool {
        match self {
            Factor::Gen(..) => true,
            Factor::Group(inner, _) => inner.mentions_generators(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Token>, Error> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
            }
            out.push(Token::Int(s.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric()) {
                s.push(d);
                chars.next();
            }
            out.push(Token::Ident(s));
        } else {
            out.push(match c {
                '+' => Token::Plus,
                '-' => Token::Minus,
                '*' | '·' => Token::Star,
                '/' => Token::Slash,
                '^' => Token::Caret,
                '(' => Token::LParen,
                ')' => Token::RParen,
                other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
            });
            chars.next();
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, Error> {
        let mut terms = Vec::new();
        let mut sign = if self.eat(&Token::Minus) {
            -Rational::one()
        } else {
            self.eat(&Token::Plus);
            Rational::one()
        };
        loop {
            let factors = self.term()?;
            terms.push(Term { sign, factors });
            if self.eat(&Token::Plus) {
                sign = Rational::one();
            } else if self.eat(&Token::Minus) {
                sign = -Rational::one();
            } else {
                break;
            }
        }
        Ok(Expr { terms })
    }

    fn term(&mut self) -> Result<Vec<Factor>, Error> {
        let mut factors = vec![self.factor()?];
        while self.eat(&Token::Star) {
            factors.push(self.factor()?);
        }
        Ok(factors)
    }

    fn exponent(&mut self) -> Result<u32, Error> {
        if !self.eat(&Token::Caret) {
            return Ok(1);
        }
        match self.next() {
            Some(Token::Int(n)) => n
                .try_into()
                .map_err(|_| Error::Parse("exponent too large".into())),
            _ => Err(Error::Parse("expected integer exponent after `^`".into())),
        }
    }

    fn factor(&mut self) -> Result<Factor, Error> {
        match self.next() {
            Some(Token::Int(n)) => {
                if self.eat(&Token::Slash) {
                    match self.next() {
                        Some(Token::Int(d)) if d != BigInt::from(0) => {
                            Ok(Factor::Number(Rational::new(n, d)))
                        }
                        _ => Err(Error::Parse("expected nonzero denominator after `/`".into())),
                    }
                } else {
                    let e = self.exponent()?;
                    Ok(Factor::Number(Rational::from_integer(n).pow(e as i32)))
                }
            }
            Some(Token::Ident(name)) => {
                let e = self.exponent()?;
                if let Some(idx) = name.strip_prefix('e') {
                    let i: usize = idx
                        .parse()
                        .ok()
                        .filter(|&i| i >= 1 && idx.bytes().all(|b| b.is_ascii_digit()))
                        .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                    return Ok(Factor::Gen(i - 1, e));
                }
                Ok(Factor::Var(name.parse()?, e))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                if !self.eat(&Token::RParen) {
                    return Err(Error::Parse("missing `)`".into()));
                }
                let e = self.exponent()?;
                Ok(Factor::Group(inner, e))
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

pub fn parse_expression(src: &str) -> Result<Expr, Error> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {}",
            p.pos + 1
        )));
    }
    Ok(e)
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples() {
        let p = parse_expression("2*x1^2*xi3 - 1/3*t").unwrap().to_poly().unwrap();
        let expected = &(&Poly::int(2) * &Poly::x(0).pow(2)) * &Poly::xi(2)
            - Poly::t().scale(&super::super::ratio(1, 3));
        assert_eq!(p, expected);
        let spaced = parse_expression(" 2 * x1 ^ 2 * xi3-1 / 3 * t ")
            .unwrap()
            .to_poly()
            .unwrap();
        assert_eq!(spaced, p);
    }

    #[test]
    fn groups_and_generators() {
        let e = parse_expression("(x1 + 1)^2·e2·e1").unwrap();
        assert!(e.mentions_generators());
        assert!(e.to_poly().is_err());
        let p = parse_expression("(x1+1)^2").unwrap().to_poly().unwrap();
        assert_eq!(p, "x1^2 + 2*x1 + 1".parse().unwrap());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x1 +", "2/0", "(x1", "x1 $ 2", "y", "e0", "x1^"] {
            assert!(parse_expression(bad).and_then(|e| e.to_poly()).is_err(), "{bad}");
        }
    }
}
