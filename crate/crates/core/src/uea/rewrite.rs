//! Words in the free algebra on functions and frame generators, and the
//! small-step normal-ordering rewrite system.
//!
//! Rules, with the algebroid data already carrying any adiabatic `t`:
//!
//! * `e_j e_i -> e_i e_j + sum_k c(j,i,k) e_k` for `j > i`
//! * `e_i f -> f e_i + rho(e_i) f`
//! * `f g -> (fg)` and a leading function is absorbed into the prefix.
//!
//! Which redex fires is decided by a [`Strategy`], so the same word can be
//! normalized along many different rewrite orders.

use std::collections::BTreeMap;

use crate::algebroid::Algebroid;
use crate::error::Error;
use crate::poly::{Expr, Factor, Poly};

use super::MultiIndex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    /// The frame generator `e_{i+1}`.
    Gen(usize),
    /// Multiplication by a function on the base.
    Func(Poly),
}

/// `prefix * letters[0] * letters[1] * ...` in the free algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeWord {
    pub prefix: Poly,
    pub letters: Vec<Letter>,
}

impl FreeWord {
    pub fn new(prefix: Poly, letters: Vec<Letter>) -> Self {
        FreeWord { prefix, letters }
    }

    /// The word `e_{g[0]} e_{g[1]} ...` with unit prefix.
    pub fn generators(gens: &[usize]) -> Self {
        FreeWord::new(Poly::one(), gens.iter().map(|&i| Letter::Gen(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Product in the free algebra: the right prefix becomes a letter.
    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut prefix = self.prefix.clone();
        let mut letters = self.letters.clone();
        match other.prefix.as_constant() {
            Some(c) => prefix = prefix.scale(&c),
            None => letters.push(Letter::Func(other.prefix.clone())),
        }
        letters.extend(other.letters.iter().cloned());
        FreeWord { prefix, letters }
    }

    /// Expands a parsed expression into a sum of words. Numbers and
    /// variables become function letters, `e<k>` tokens generator letters;
    /// parenthesized groups distribute.
    pub fn from_expr(expr: &Expr) -> Vec<FreeWord> {
        let mut out = Vec::new();
        for term in &expr.terms {
            let mut acc = vec![FreeWord::new(Poly::constant(term.sign.clone()), vec![])];
            for f in &term.factors {
                let words = factor_words(f);
                acc = product(&acc, &words);
            }
            out.extend(acc);
        }
        out
    }

    fn is_normal(&self) -> bool {
        let mut last = 0;
        for l in &self.letters {
            match l {
                Letter::Gen(i) if *i >= last => last = *i,
                _ => return false,
            }
        }
        true
    }

    fn multi_index(&self, rank: usize) -> MultiIndex {
        let mut alpha = vec![0; rank];
        for l in &self.letters {
            if let Letter::Gen(i) = l {
                alpha[*i] += 1;
            }
        }
        alpha
    }

    fn redex_positions(&self) -> impl Iterator<Item = usize> + '_ {
        let first = matches!(self.letters.first(), Some(Letter::Func(_)));
        let pairs = self.letters.windows(2).enumerate().filter_map(|(p, w)| {
            let hit = match (&w[0], &w[1]) {
                (Letter::Func(_), Letter::Func(_)) => true,
                (Letter::Gen(_), Letter::Func(_)) => true,
                (Letter::Gen(j), Letter::Gen(i)) => j > i,
                _ => false,
            };
            hit.then_some(p)
        });
        // position usize::MAX marks the leading-function absorption
        first.then_some(usize::MAX).into_iter().chain(pairs)
    }
}

fn factor_words(f: &Factor) -> Vec<FreeWord> {
    match f {
        Factor::Number(c) => vec![FreeWord::new(Poly::constant(c.clone()), vec![])],
        Factor::Var(v, e) => vec![FreeWord::new(
            Poly::one(),
            vec![Letter::Func(Poly::var(*v).pow(*e))],
        )],
        Factor::Gen(i, e) => vec![FreeWord::new(
            Poly::one(),
            vec![Letter::Gen(*i); *e as usize],
        )],
        Factor::Group(inner, e) => {
            let words = FreeWord::from_expr(inner);
            let mut acc = vec![FreeWord::new(Poly::one(), vec![])];
            for _ in 0..*e {
                acc = product(&acc, &words);
            }
            acc
        }
    }
}

fn product(a: &[FreeWord], b: &[FreeWord]) -> Vec<FreeWord> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.concat(y)))
        .collect()
}

/// A redex: word `word` of the current sum, at letter `position`
/// (`usize::MAX` for absorbing a leading function into the prefix).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Redex {
    pub word: usize,
    pub position: usize,
}

/// Chooses the next redex to fire among all redexes of the current sum.
pub trait Strategy {
    /// `redexes` is never empty; return an index into it.
    fn select(&mut self, redexes: &[Redex]) -> usize;
}

/// Always fires the first redex of the first reducible word.
#[derive(Clone, Copy, Debug, Default)]
pub struct LeftmostInnermost;

impl Strategy for LeftmostInnermost {
    fn select(&mut self, _redexes: &[Redex]) -> usize {
        0
    }
}

/// Always fires the last redex of the last reducible word.
#[derive(Clone, Copy, Debug, Default)]
pub struct RightmostFirst;

impl Strategy for RightmostFirst {
    fn select(&mut self, redexes: &[Redex]) -> usize {
        redexes.len() - 1
    }
}

impl<F: FnMut(&[Redex]) -> usize> Strategy for F {
    fn select(&mut self, redexes: &[Redex]) -> usize {
        self(redexes)
    }
}

/// Result of a rewriting run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub terms: BTreeMap<MultiIndex, Poly>,
    pub steps: usize,
}

pub struct Rewriter<'a> {
    alg: &'a Algebroid,
    max_steps: usize,
}

impl<'a> Rewriter<'a> {
    pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

    pub fn new(alg: &'a Algebroid) -> Self {
        Rewriter {
            alg,
            max_steps: Self::DEFAULT_MAX_STEPS,
        }
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn validate(&self, w: &FreeWord) -> Result<(), Error> {
        self.alg.check_base_poly(&w.prefix)?;
        for l in &w.letters {
            match l {
                Letter::Gen(i) if *i >= self.alg.rank() => {
                    return Err(Error::UnknownGenerator(i + 1))
                }
                Letter::Func(f) => self.alg.check_base_poly(f)?,
                _ => {}
            }
        }
        Ok(())
    }

    /// Rewrites the sum of `words` to normal form, letting `strategy` pick
    /// each step.
    pub fn normalize(
        &self,
        words: Vec<FreeWord>,
        strategy: &mut dyn Strategy,
    ) -> Result<Normalized, Error> {
        for w in &words {
            self.validate(w)?;
        }
        let rank = self.alg.rank();
        let mut done: BTreeMap<MultiIndex, Poly> = BTreeMap::new();
        let mut active: Vec<FreeWord> = words.into_iter().filter(|w| !w.prefix.is_zero()).collect();
        let mut steps = 0;
        let mut redexes = Vec::new();
        loop {
            let mut k = 0;
            while k < active.len() {
                if active[k].is_normal() {
                    let w = active.swap_remove(k);
                    super::add_term(&mut done, w.multi_index(rank), &w.prefix);
                } else {
                    k += 1;
                }
            }
            if active.is_empty() {
                break;
            }
            if steps >= self.max_steps {
                return Err(Error::RewriteLimit(self.max_steps));
            }
            redexes.clear();
            for (word, w) in active.iter().enumerate() {
                redexes.extend(w.redex_positions().map(|position| Redex { word, position }));
            }
            let pick = strategy.select(&redexes).min(redexes.len() - 1);
            let Redex { word, position } = redexes[pick];
            let w = active.swap_remove(word);
            active.extend(self.fire(w, position));
            steps += 1;
        }
        done.retain(|_, p| !p.is_zero());
        Ok(Normalized { terms: done, steps })
    }

    fn fire(&self, mut w: FreeWord, position: usize) -> Vec<FreeWord> {
        if position == usize::MAX {
            let Letter::Func(f) = w.letters.remove(0) else {
                unreachable!("absorption redex on a generator")
            };
            w.prefix = &w.prefix * &f;
            return nonzero(vec![w]);
        }
        let (a, b) = (w.letters[position].clone(), w.letters[position + 1].clone());
        match (a, b) {
            (Letter::Func(f), Letter::Func(g)) => {
                w.letters.splice(position..position + 2, [Letter::Func(&f * &g)]);
                nonzero(vec![w])
            }
            (Letter::Gen(i), Letter::Func(f)) => {
                let mut swapped = w.clone();
                swapped.letters[position] = Letter::Func(f.clone());
                swapped.letters[position + 1] = Letter::Gen(i);
                let derived = self.alg.anchor_apply(i, &f);
                let mut out = vec![swapped];
                if !derived.is_zero() {
                    out.push(replace_pair(&w, position, derived, None));
                }
                nonzero(out)
            }
            (Letter::Gen(j), Letter::Gen(i)) => {
                let mut swapped = w.clone();
                swapped.letters[position] = Letter::Gen(i);
                swapped.letters[position + 1] = Letter::Gen(j);
                let mut out = vec![swapped];
                for k in 0..self.alg.rank() {
                    let c = self.alg.structure(j, i, k);
                    if !c.is_zero() {
                        out.push(replace_pair(&w, position, c.clone(), Some(k)));
                    }
                }
                nonzero(out)
            }
            (Letter::Func(_), Letter::Gen(_)) => unreachable!("not a redex"),
        }
    }
}

/// Replaces the two letters at `position` by `f` (and optionally `e_k`).
/// Constant functions go straight into the prefix.
fn replace_pair(w: &FreeWord, position: usize, f: Poly, gen: Option<usize>) -> FreeWord {
    let mut prefix = w.prefix.clone();
    let mut middle = Vec::with_capacity(2);
    match f.as_constant() {
        Some(c) => prefix = prefix.scale(&c),
        None => middle.push(Letter::Func(f)),
    }
    middle.extend(gen.map(Letter::Gen));
    let mut letters = w.letters[..position].to_vec();
    letters.extend(middle);
    letters.extend_from_slice(&w.letters[position + 2..]);
    FreeWord { prefix, letters }
}

fn nonzero(words: Vec<FreeWord>) -> Vec<FreeWord> {
    words
        .into_iter()
        .filter(|w| {
            !w.prefix.is_zero()
                && !w
                    .letters
                    .iter()
                    .any(|l| matches!(l, Letter::Func(f) if f.is_zero()))
        })
        .collect()
}
