//! The universal enveloping algebra `U(A)` of a Lie algebroid, kept in PBW
//! normal form.
//!
//! An element is `sum_alpha f_alpha(x) e_1^{alpha_1} ... e_n^{alpha_n}` with
//! function coefficients on the left. For an adiabatic algebroid this is
//! `U(A_t)`, and `t` is an ordinary central coefficient variable.

mod rewrite;

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::algebroid::{Algebroid, Section};
use crate::error::Error;
use crate::poly::{Monomial, Poly, Rational, Var};

pub use rewrite::{
    FreeWord, Letter, LeftmostInnermost, Normalized, Redex, Rewriter, RightmostFirst, Strategy,
};

/// Exponents of the ordered monomial `e_1^{a_1} ... e_n^{a_n}`.
pub type MultiIndex = Vec<u32>;

type Terms = BTreeMap<MultiIndex, Poly>;

fn add_term(terms: &mut Terms, alpha: MultiIndex, c: &Poly) {
    if c.is_zero() {
        return;
    }
    match terms.entry(alpha) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// `out += coeff * other`, with `coeff` a function multiplying on the left.
fn add_scaled(out: &mut Terms, coeff: &Poly, other: &Terms) {
    if coeff.is_zero() {
        return;
    }
    let unit = coeff.is_one();
    for (alpha, c) in other {
        if unit {
            add_term(out, alpha.clone(), c);
        } else {
            add_term(out, alpha.clone(), &(coeff * c));
        }
    }
}

fn order_of(terms: &Terms) -> Option<usize> {
    terms.keys().map(|a| degree(a)).max()
}

fn degree(alpha: &[u32]) -> usize {
    alpha.iter().map(|&a| a as usize).sum()
}

/// The fiber monomial `xi^alpha`.
pub fn xi_monomial(alpha: &[u32]) -> Monomial {
    Monomial::from_pairs(
        alpha
            .iter()
            .enumerate()
            .map(|(i, &a)| (Var::Xi(i as u32), a)),
    )
}

fn multi_index_of(m: &Monomial, rank: usize) -> MultiIndex {
    let mut alpha = vec![0; rank];
    for (v, e) in m.iter() {
        if let Var::Xi(i) = v {
            alpha[i as usize] = e;
        }
    }
    alpha
}

/// An element of `U(A)` in PBW normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UeaElement {
    algebroid: Arc<Algebroid>,
    terms: Terms,
}

impl UeaElement {
    pub fn algebroid(&self) -> &Algebroid {
        &self.algebroid
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &[u32]) -> Poly {
        self.terms.get(alpha).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Filtration degree: the largest `|alpha|`; `None` for zero.
    pub fn order(&self) -> Option<usize> {
        order_of(&self.terms)
    }

    /// The part of order exactly `m`.
    pub fn homogeneous_part(&self, m: usize) -> UeaElement {
        self.with_terms(
            self.terms
                .iter()
                .filter(|(a, _)| degree(a) == m)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        )
    }

    fn with_terms(&self, terms: Terms) -> UeaElement {
        UeaElement {
            algebroid: self.algebroid.clone(),
            terms,
        }
    }

    fn same_algebra(&self, other: &UeaElement) -> Result<(), Error> {
        if Arc::ptr_eq(&self.algebroid, &other.algebroid) || self.algebroid == other.algebroid {
            Ok(())
        } else {
            Err(Error::AlgebroidMismatch)
        }
    }

    pub fn add(&self, other: &UeaElement) -> Result<UeaElement, Error> {
        self.same_algebra(other)?;
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &Poly::one(), &other.terms);
        Ok(self.with_terms(terms))
    }

    pub fn sub(&self, other: &UeaElement) -> Result<UeaElement, Error> {
        self.same_algebra(other)?;
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &Poly::int(-1), &other.terms);
        Ok(self.with_terms(terms))
    }

    /// Left multiplication by a function; no reordering is needed.
    pub fn scale_left(&self, f: &Poly) -> UeaElement {
        let mut terms = Terms::new();
        add_scaled(&mut terms, f, &self.terms);
        self.with_terms(terms)
    }
}

impl fmt::Display for UeaElement {
    /// `(x1)·e1·e2 + (-1/2)·e3`: terms by descending order, then descending
    /// lexicographic multi-index; coefficients always parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| degree(b).cmp(&degree(a)).then_with(|| b.cmp(a)));
        for (n, (alpha, c)) in terms.into_iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for (i, &a) in alpha.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "·e{}", i + 1)?,
                    _ => write!(f, "·e{}^{}", i + 1, a)?,
                }
            }
        }
        Ok(())
    }
}

/// Computation context for `U(A)`: owns the algebroid and memoizes the
/// normal ordering of `e_i * e^alpha` and the symmetrized monomials.
///
/// The caches are interior-mutable and the type is deliberately not `Sync`;
/// create one engine per thread.
pub struct Enveloping {
    alg: Arc<Algebroid>,
    gen_cache: RefCell<HashMap<(usize, MultiIndex), Terms>>,
    sym_cache: RefCell<HashMap<MultiIndex, Terms>>,
}

impl Enveloping {
    pub fn new(alg: Algebroid) -> Self {
        Enveloping::from_arc(Arc::new(alg))
    }

    pub fn from_arc(alg: Arc<Algebroid>) -> Self {
        Enveloping {
            alg,
            gen_cache: RefCell::new(HashMap::new()),
            sym_cache: RefCell::new(HashMap::new()),
        }
    }

    /// `U(A_t)` for a non-adiabatic `A`.
    pub fn adiabatic(alg: &Algebroid) -> Result<Self, Error> {
        Ok(Enveloping::new(alg.adiabatic()?))
    }

    pub fn algebroid(&self) -> &Algebroid {
        &self.alg
    }

    pub fn rank(&self) -> usize {
        self.alg.rank()
    }

    fn element(&self, terms: Terms) -> UeaElement {
        UeaElement {
            algebroid: self.alg.clone(),
            terms,
        }
    }

    fn owns(&self, a: &UeaElement) -> Result<(), Error> {
        if Arc::ptr_eq(&self.alg, &a.algebroid) || *self.alg == *a.algebroid {
            Ok(())
        } else {
            Err(Error::AlgebroidMismatch)
        }
    }

    pub fn zero(&self) -> UeaElement {
        self.element(Terms::new())
    }

    pub fn one(&self) -> UeaElement {
        self.monomial(vec![0; self.rank()], Poly::one())
    }

    /// `coeff * e^alpha`.
    pub fn monomial(&self, alpha: MultiIndex, coeff: Poly) -> UeaElement {
        let mut terms = Terms::new();
        add_term(&mut terms, alpha, &coeff);
        self.element(terms)
    }

    pub fn generator(&self, i: usize) -> Result<UeaElement, Error> {
        if i >= self.rank() {
            return Err(Error::UnknownGenerator(i + 1));
        }
        let mut alpha = vec![0; self.rank()];
        alpha[i] = 1;
        Ok(self.monomial(alpha, Poly::one()))
    }

    /// Builds an element from explicit PBW coefficients.
    pub fn from_terms(
        &self,
        terms: impl IntoIterator<Item = (MultiIndex, Poly)>,
    ) -> Result<UeaElement, Error> {
        let mut out = Terms::new();
        for (alpha, c) in terms {
            if alpha.len() != self.rank() {
                return Err(Error::RankMismatch {
                    expected: self.rank(),
                    found: alpha.len(),
                });
            }
            self.alg.check_base_poly(&c)?;
            add_term(&mut out, alpha, &c);
        }
        Ok(self.element(out))
    }

    /// The embedding of functions, an algebra morphism into order zero.
    pub fn inject_function(&self, f: &Poly) -> Result<UeaElement, Error> {
        self.alg.check_base_poly(f)?;
        Ok(self.monomial(vec![0; self.rank()], f.clone()))
    }

    /// The embedding of sections into order one.
    pub fn inject_section(&self, x: &Section) -> Result<UeaElement, Error> {
        self.alg.check_section(x)?;
        let mut terms = Terms::new();
        for (i, c) in x.0.iter().enumerate() {
            let mut alpha = vec![0; self.rank()];
            alpha[i] = 1;
            add_term(&mut terms, alpha, c);
        }
        Ok(self.element(terms))
    }

    /// Normal form of `e_i * e^alpha`.
    fn gen_times_monomial(&self, i: usize, alpha: &[u32]) -> Terms {
        let first = alpha.iter().position(|&a| a > 0);
        let j = match first {
            Some(j) if j < i => j,
            _ => {
                let mut beta = alpha.to_vec();
                beta[i] += 1;
                return Terms::from([(beta, Poly::one())]);
            }
        };
        let key = (i, alpha.to_vec());
        if let Some(hit) = self.gen_cache.borrow().get(&key) {
            return hit.clone();
        }
        // e_i e_j rest = e_j (e_i rest) + sum_k c(i,j,k) e_k rest
        let mut rest = alpha.to_vec();
        rest[j] -= 1;
        let inner = self.gen_times_monomial(i, &rest);
        let mut out = self.gen_times_terms(j, &inner);
        for k in 0..self.rank() {
            let c = self.alg.structure(i, j, k);
            if !c.is_zero() {
                let moved = self.gen_times_monomial(k, &rest);
                add_scaled(&mut out, c, &moved);
            }
        }
        self.gen_cache.borrow_mut().insert(key, out.clone());
        out
    }

    /// Normal form of `e_i * X`.
    fn gen_times_terms(&self, i: usize, x: &Terms) -> Terms {
        let mut out = Terms::new();
        for (beta, g) in x {
            // e_i g = g e_i + rho(e_i) g
            let moved = self.gen_times_monomial(i, beta);
            add_scaled(&mut out, g, &moved);
            let d = self.alg.anchor_apply(i, g);
            add_term(&mut out, beta.clone(), &d);
        }
        out
    }

    /// `e^alpha * X`, applying the generators of `alpha` from the right.
    fn monomial_times_terms(&self, alpha: &[u32], x: &Terms) -> Terms {
        let mut acc = x.clone();
        for i in (0..alpha.len()).rev() {
            for _ in 0..alpha[i] {
                acc = self.gen_times_terms(i, &acc);
            }
        }
        acc
    }

    /// Normal form of a free word by right-to-left evaluation. This is one
    /// particular rewrite order; [`Enveloping::normal_form_with`] runs the
    /// small-step system under an arbitrary strategy.
    pub fn normal_form(&self, w: &FreeWord) -> Result<UeaElement, Error> {
        Rewriter::new(&self.alg).validate(w)?;
        let mut acc: Terms = Terms::from([(vec![0; self.rank()], Poly::one())]);
        for l in w.letters.iter().rev() {
            acc = match l {
                Letter::Gen(i) => self.gen_times_terms(*i, &acc),
                Letter::Func(f) => {
                    let mut out = Terms::new();
                    add_scaled(&mut out, f, &acc);
                    out
                }
            };
        }
        let mut out = Terms::new();
        add_scaled(&mut out, &w.prefix, &acc);
        Ok(self.element(out))
    }

    /// Normal form of a sum of words.
    pub fn normal_form_sum(&self, words: &[FreeWord]) -> Result<UeaElement, Error> {
        let mut out = Terms::new();
        for w in words {
            add_scaled(&mut out, &Poly::one(), &self.normal_form(w)?.terms);
        }
        Ok(self.element(out))
    }

    /// Small-step rewriting under `strategy`; also returns the step count.
    pub fn normal_form_with(
        &self,
        words: Vec<FreeWord>,
        strategy: &mut dyn Strategy,
        max_steps: usize,
    ) -> Result<(UeaElement, usize), Error> {
        let n = Rewriter::new(&self.alg)
            .with_max_steps(max_steps)
            .normalize(words, strategy)?;
        Ok((self.element(n.terms), n.steps))
    }

    pub fn multiply(&self, a: &UeaElement, b: &UeaElement) -> Result<UeaElement, Error> {
        self.owns(a)?;
        self.owns(b)?;
        let mut out = Terms::new();
        for (alpha, f) in &a.terms {
            let prod = self.monomial_times_terms(alpha, &b.terms);
            add_scaled(&mut out, f, &prod);
        }
        Ok(self.element(out))
    }

    /// `ab - ba`.
    pub fn commutator(&self, a: &UeaElement, b: &UeaElement) -> Result<UeaElement, Error> {
        self.multiply(a, b)?.sub(&self.multiply(b, a)?)
    }

    /// The symmetrized monomial `S(alpha)`: the average over all orderings of
    /// the letters of `e^alpha`, computed through
    /// `S(alpha) = sum_i (alpha_i / |alpha|) e_i S(alpha - eps_i)`.
    fn symmetrized(&self, alpha: &[u32]) -> Terms {
        let total = degree(alpha);
        if total <= 1 {
            return Terms::from([(alpha.to_vec(), Poly::one())]);
        }
        if let Some(hit) = self.sym_cache.borrow().get(alpha) {
            return hit.clone();
        }
        let mut out = Terms::new();
        for i in 0..alpha.len() {
            if alpha[i] == 0 {
                continue;
            }
            let mut lower = alpha.to_vec();
            lower[i] -= 1;
            let inner = self.symmetrized(&lower);
            let weight = Poly::constant(Rational::new(
                (alpha[i] as i64).into(),
                (total as i64).into(),
            ));
            add_scaled(&mut out, &weight, &self.gen_times_terms(i, &inner));
        }
        self.sym_cache.borrow_mut().insert(alpha.to_vec(), out.clone());
        out
    }

    fn quantize_terms(&self, f: &Poly) -> Terms {
        let mut out = Terms::new();
        for (m, h) in f.collect_by(Var::is_fiber) {
            let alpha = multi_index_of(&m, self.rank());
            add_scaled(&mut out, &h, &self.symmetrized(&alpha));
        }
        out
    }

    /// The quantization map `q`: `h(x) xi^alpha` goes to `h` times the full
    /// symmetrization of `e^alpha`.
    pub fn quantize(&self, f: &Poly) -> Result<UeaElement, Error> {
        self.alg.check_fiber_poly(f)?;
        Ok(self.element(self.quantize_terms(f)))
    }

    /// The complete symbol: the inverse of [`Enveloping::quantize`], found by
    /// peeling off the top-order part and subtracting its quantization.
    pub fn symbol(&self, a: &UeaElement) -> Result<Poly, Error> {
        self.owns(a)?;
        let mut rest = a.terms.clone();
        let mut out = Poly::zero();
        while let Some(m) = order_of(&rest) {
            let top = top_symbol(&rest, m);
            let q = self.quantize_terms(&top);
            add_scaled(&mut rest, &Poly::int(-1), &q);
            debug_assert!(order_of(&rest).map_or(true, |o| o < m));
            out += &top;
        }
        Ok(out)
    }

    /// The order-`m` principal symbol `sum_{|alpha| = m} f_alpha xi^alpha`.
    pub fn principal_symbol(&self, a: &UeaElement, m: usize) -> Result<Poly, Error> {
        self.owns(a)?;
        match a.order() {
            Some(order) if order > m => Err(Error::OrderTooHigh { order, requested: m }),
            _ => Ok(top_symbol(&a.terms, m)),
        }
    }

    /// The action of `a` on functions through the anchor:
    /// `e^alpha` acts as `rho(e_1)^{a_1} ... rho(e_n)^{a_n}`.
    pub fn act(&self, a: &UeaElement, h: &Poly) -> Result<Poly, Error> {
        self.owns(a)?;
        self.alg.check_base_poly(h)?;
        let mut out = Poly::zero();
        for (alpha, f) in &a.terms {
            let mut v = h.clone();
            for i in (0..alpha.len()).rev() {
                for _ in 0..alpha[i] {
                    v = self.alg.anchor_apply(i, &v);
                }
            }
            out += &(f * &v);
        }
        Ok(out)
    }

    /// Parses an element written with the expression grammar, e.g.
    /// `x1*e2*e1 - 1/2*e3`, and normal-orders it.
    pub fn parse_element(&self, src: &str) -> Result<UeaElement, Error> {
        let expr = crate::poly::parse_expression(src)?;
        self.normal_form_sum(&FreeWord::from_expr(&expr))
    }
}

fn top_symbol(terms: &Terms, m: usize) -> Poly {
    let mut out = Poly::zero();
    for (alpha, c) in terms {
        if degree(alpha) == m {
            out += &(c * &Poly::term(Rational::one(), xi_monomial(alpha)));
        }
    }
    out
}

/// Normal form of `w` in `U(A)`, or in `U(A_t)` when `adiabatic` is set
/// (each rewrite then carries a factor `t`), under the default leftmost
/// rewrite strategy.
pub fn normal_form(w: &FreeWord, alg: &Algebroid, adiabatic: bool) -> Result<UeaElement, Error> {
    let env = if adiabatic {
        Enveloping::adiabatic(alg)?
    } else {
        Enveloping::new(alg.clone())
    };
    let (nf, _) = env.normal_form_with(
        vec![w.clone()],
        &mut LeftmostInnermost,
        Rewriter::DEFAULT_MAX_STEPS,
    )?;
    Ok(nf)
}

/// The star product on fiberwise-polynomial functions on `A*` induced by
/// `U(A_t)`: `f * g = symbol(q(f) q(g))`, an exact polynomial in `t`.
pub struct StarProduct {
    base: Algebroid,
    env: Enveloping,
}

impl StarProduct {
    pub fn new(alg: &Algebroid) -> Result<Self, Error> {
        Ok(StarProduct {
            base: alg.clone(),
            env: Enveloping::adiabatic(alg)?,
        })
    }

    /// The star product carried by an algebroid that is already adiabatic,
    /// using its own enveloping algebra; `base()` is its specialization at
    /// `t = 1`.
    pub fn from_adiabatic(alg_t: &Algebroid) -> Result<Self, Error> {
        if !alg_t.is_adiabatic() {
            return Err(Error::InvalidAlgebroid("expected an adiabatic algebroid".into()));
        }
        Ok(StarProduct {
            base: alg_t.at_t(&Poly::one())?,
            env: Enveloping::new(alg_t.clone()),
        })
    }

    /// [`StarProduct::new`] or [`StarProduct::from_adiabatic`], whichever
    /// applies.
    pub fn for_algebroid(alg: &Algebroid) -> Result<Self, Error> {
        if alg.is_adiabatic() {
            Self::from_adiabatic(alg)
        } else {
            Self::new(alg)
        }
    }

    pub fn base(&self) -> &Algebroid {
        &self.base
    }

    /// The underlying `U(A_t)`.
    pub fn enveloping(&self) -> &Enveloping {
        &self.env
    }

    /// Accepts functions on `A*` that may already depend on `t`, so that
    /// iterated products are defined.
    pub fn star(&self, f: &Poly, g: &Poly) -> Result<Poly, Error> {
        let qf = self.env.quantize(f)?;
        let qg = self.env.quantize(g)?;
        self.env.symbol(&self.env.multiply(&qf, &qg)?)
    }

    /// `B_r(f, g)` for `r = 0, 1, ...` in `f * g = sum_r t^r B_r(f, g)`.
    pub fn cochains(&self, f: &Poly, g: &Poly) -> Result<Vec<Poly>, Error> {
        Ok(self.star(f, g)?.t_coefficients())
    }
}

/// One-shot star product over a non-adiabatic algebroid.
pub fn star(alg: &Algebroid, f: &Poly, g: &Poly) -> Result<Poly, Error> {
    StarProduct::new(alg)?.star(f, g)
}

#[cfg(test)]
mod tests;
