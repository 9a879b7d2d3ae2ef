//! Exact multivariate polynomials over the rationals.
//!
//! Every polynomial lives in one global, name-keyed variable universe:
//! base coordinates `x1, x2, ...`, fiber coordinates `xi1, xi2, ...` and the
//! deformation parameter `t`. Monomials are stored sparsely as sorted
//! `(variable, exponent)` lists so that structural equality of the term map
//! is polynomial equality.

mod parse;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub use parse::{parse_expression, Expr, Factor, Term};

/// Exact scalar coefficients.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A variable of the global universe. Indices are zero-based; `X(0)` is
/// printed as `x1`.
///
/// The derived order (`t` first, then base, then fiber coordinates) is the
/// order in which variables appear inside a printed monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    X(u32),
    Xi(u32),
}

impl Var {
    pub fn is_fiber(self) -> bool {
        matches!(self, Var::Xi(_))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::T => write!(f, "t"),
            Var::X(i) => write!(f, "x{}", i + 1),
            Var::Xi(i) => write!(f, "xi{}", i + 1),
        }
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let index = |digits: &str| -> Option<u32> {
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            digits.parse::<u32>().ok().filter(|&i| i >= 1).map(|i| i - 1)
        };
        if s == "t" {
            return Ok(Var::T);
        }
        if let Some(rest) = s.strip_prefix("xi") {
            if let Some(i) = index(rest) {
                return Ok(Var::Xi(i));
            }
        }
        if let Some(rest) = s.strip_prefix('x') {
            if let Some(i) = index(rest) {
                return Ok(Var::X(i));
            }
        }
        Err(Error::UnknownVariable(s.to_string()))
    }
}

/// A monomial: variables in increasing order, every exponent positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs, merging repeats.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Removes one factor of `v`, returning the exponent it had.
    fn lower(&self, v: Var) -> Option<(u32, Monomial)> {
        let pos = self.0.iter().position(|&(w, _)| w == v)?;
        let e = self.0[pos].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some((e, Monomial(out)))
    }

    /// Splits into the part in `keep` variables and the rest.
    fn split(&self, keep: impl Fn(Var) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().partition(|(v, _)| keep(*v));
        (Monomial(a), Monomial(b))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (v, e)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A multivariate polynomial with rational coefficients.
///
/// No stored coefficient is zero, so `==` is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rat(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Rational::one(), Monomial::var(v))
    }

    pub fn x(i: u32) -> Self {
        Poly::var(Var::X(i))
    }

    pub fn xi(i: u32) -> Self {
        Poly::var(Var::Xi(i))
    }

    pub fn t() -> Self {
        Poly::var(Var::T)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// The constant value, if the polynomial mentions no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Variables that actually occur.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v))
            .collect()
    }

    /// Total degree in the variables selected by `pred`; `None` for zero.
    pub fn degree_in(&self, pred: impl Fn(Var) -> bool) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| m.iter().filter(|(v, _)| pred(*v)).map(|(_, e)| e).sum())
            .max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.degree_in(|_| true)
    }

    /// Degree in the fiber variables `xi*`.
    pub fn fiber_degree(&self) -> Option<u32> {
        self.degree_in(Var::is_fiber)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(v) {
                out.add_term(lowered, c * rat(e as i64));
            }
        }
        out
    }

    /// Partial derivative with respect to a variable given by name.
    pub fn partial_named(&self, name: &str) -> Result<Poly, Error> {
        Ok(self.partial(name.parse()?))
    }

    /// Simultaneous substitution; unbound variables are left untouched.
    pub fn substitute(&self, bindings: &HashMap<Var, Poly>) -> Poly {
        let mut powers: HashMap<(Var, u32), Poly> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for (v, e) in m.iter() {
                match bindings.get(&v) {
                    Some(image) => {
                        let p = powers.entry((v, e)).or_insert_with(|| image.pow(e));
                        acc = &acc * &*p;
                    }
                    None => kept.push((v, e)),
                }
            }
            if !kept.is_empty() {
                acc = &acc * &Poly::term(Rational::one(), Monomial(kept));
            }
            out += &acc;
        }
        out
    }

    /// Substitutes a single variable.
    pub fn subs(&self, v: Var, image: &Poly) -> Poly {
        self.substitute(&HashMap::from([(v, image.clone())]))
    }

    /// Splits by the monomial in the variables selected by `pred`: the result
    /// maps each such monomial to its coefficient in the remaining variables.
    pub fn collect_by(&self, pred: impl Fn(Var) -> bool) -> BTreeMap<Monomial, Poly> {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (key, rest) = m.split(&pred);
            out.entry(key).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Coefficients in powers of `t`, lowest first; empty for zero.
    pub fn t_coefficients(&self) -> Vec<Poly> {
        let parts = self.collect_by(|v| v == Var::T);
        let top = parts.keys().map(|m| m.exponent(Var::T)).max();
        let mut out = vec![Poly::zero(); top.map_or(0, |d| d as usize + 1)];
        for (m, p) in parts {
            out[m.exponent(Var::T) as usize] = p;
        }
        out
    }

    /// The coefficient of `t^r`.
    pub fn t_coefficient(&self, r: u32) -> Poly {
        self.t_coefficients()
            .into_iter()
            .nth(r as usize)
            .unwrap_or_default()
    }
}

impl fmt::Display for Poly {
    /// Terms are grouped by ascending power of `t`; inside a group by
    /// descending degree, then descending lexicographic exponent order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex_print_cmp(a.0, b.0));
        for (n, (m, c)) in terms.into_iter().enumerate() {
            // later terms carry their sign in the separator
            let shown = if n == 0 {
                c.clone()
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
                c.abs()
            };
            if m.is_one() {
                write!(f, "{shown}")?;
            } else if shown.is_one() {
                write!(f, "{m}")?;
            } else if (-&shown).is_one() {
                write!(f, "-{m}")?;
            } else if shown.is_integer() {
                write!(f, "{shown}*{m}")?;
            } else {
                write!(f, "({shown})*{m}")?;
            }
        }
        Ok(())
    }
}

/// Print order: ascending `t` power, then descending degree in the other
/// variables, then descending lexicographic order of exponent vectors.
fn grlex_print_cmp(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    let ta = a.exponent(Var::T);
    let tb = b.exponent(Var::T);
    ta.cmp(&tb)
        .then_with(|| {
            let da = a.degree() - ta;
            let db = b.degree() - tb;
            db.cmp(&da)
        })
        .then_with(|| lex_desc(a, b))
}

/// Lexicographic comparison of dense exponent vectors (variables in their
/// natural order, `t` ignored), larger first.
fn lex_desc(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    let mut ia = a.iter().filter(|&(v, _)| v != Var::T).peekable();
    let mut ib = b.iter().filter(|&(v, _)| v != Var::T).peekable();
    loop {
        match (ia.peek().copied(), ib.peek().copied()) {
            (None, None) => return std::cmp::Ordering::Equal,
            (Some(_), None) => return std::cmp::Ordering::Less,
            (None, Some(_)) => return std::cmp::Ordering::Greater,
            (Some((va, ea)), Some((vb, eb))) => {
                if va != vb {
                    // the one holding the smaller variable has the larger
                    // exponent at that slot
                    return va.cmp(&vb);
                }
                if ea != eb {
                    return eb.cmp(&ea);
                }
                ia.next();
                ib.next();
            }
        }
    }
}

impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        parse_expression(s)?.to_poly()
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Parses a rational literal such as `3`, `-1` or `3/2`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}
