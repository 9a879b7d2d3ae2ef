//! Seeded random data and an independent brute-force model of `U(g)` for a
//! Lie algebra `g`, shared by the integration tests.

#![allow(dead_code)]

pub mod oracle;

use lie_algebroid::groupoid::{FiniteGroupoid, QMatrix, ReducedKernel};
use lie_algebroid::poly::{ratio, Monomial, Poly, Rational, Var};
use lie_algebroid::{Algebroid, Enveloping, FreeWord, Letter, UeaElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(r: &mut impl Rng) -> Rational {
    let num = loop {
        let n = r.gen_range(-4..=4);
        if n != 0 {
            break n;
        }
    };
    ratio(num, r.gen_range(1..=3))
}

fn random_monomial(r: &mut impl Rng, vars: &[Var], max_degree: u32) -> Monomial {
    let degree = r.gen_range(0..=max_degree);
    let mut pairs = Vec::new();
    for _ in 0..degree {
        if vars.is_empty() {
            break;
        }
        pairs.push((vars[r.gen_range(0..vars.len())], 1));
    }
    pairs
        .into_iter()
        .fold(Monomial::one(), |m, (v, e)| m.mul(&Monomial::from_pairs([(v, e)])))
}

/// A random function on the base of `alg`, total degree at most 2.
pub fn random_base_poly(r: &mut impl Rng, alg: &Algebroid) -> Poly {
    let vars: Vec<Var> = (0..alg.base_dim() as u32).map(Var::X).collect();
    let mut p = Poly::zero();
    for _ in 0..r.gen_range(1..=2) {
        p.add_term(random_monomial(r, &vars, 2), small_rational(r));
    }
    if alg.is_adiabatic() && r.gen_bool(0.3) {
        p = &p * &(Poly::one() + Poly::t());
    }
    p
}

/// A random fiberwise-polynomial function of fiber degree at most
/// `max_fiber`, with a few terms.
pub fn random_fiber_poly(r: &mut impl Rng, alg: &Algebroid, max_fiber: u32) -> Poly {
    let fiber: Vec<Var> = (0..alg.rank() as u32).map(Var::Xi).collect();
    let mut p = Poly::zero();
    for _ in 0..r.gen_range(1..=3) {
        let m = random_monomial(r, &fiber, max_fiber);
        let h = random_base_poly(r, alg);
        p += &(&h * &Poly::term(Rational::from_integer(1.into()), m));
    }
    p
}

/// A random fiberwise-polynomial function homogeneous of fiber degree `d`
/// and nonzero.
pub fn random_homogeneous(r: &mut impl Rng, alg: &Algebroid, d: u32) -> Poly {
    let fiber: Vec<Var> = (0..alg.rank() as u32).map(Var::Xi).collect();
    loop {
        let mut p = Poly::zero();
        for _ in 0..r.gen_range(1..=3) {
            let mut m = Monomial::one();
            for _ in 0..d {
                m = m.mul(&Monomial::var(fiber[r.gen_range(0..fiber.len())]));
            }
            p += &(&random_base_poly(r, alg) * &Poly::term(Rational::from_integer(1.into()), m));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random word of length `1..=max_len` mixing generators and (when the base
/// is not a point) function letters.
pub fn random_word(r: &mut impl Rng, alg: &Algebroid, max_len: usize) -> FreeWord {
    let len = r.gen_range(1..=max_len);
    let letters = (0..len)
        .map(|_| {
            if alg.base_dim() > 0 && r.gen_bool(0.3) {
                Letter::Func(random_base_poly(r, alg))
            } else {
                Letter::Gen(r.gen_range(0..alg.rank()))
            }
        })
        .collect();
    FreeWord::new(Poly::constant(small_rational(r)), letters)
}

/// A random nonzero element of order exactly `order`.
pub fn random_element(r: &mut impl Rng, env: &Enveloping, order: usize) -> UeaElement {
    loop {
        let mut words = Vec::new();
        for k in 0..=order {
            if k < order && r.gen_bool(0.5) {
                continue;
            }
            let gens: Vec<Letter> = (0..k).map(|_| Letter::Gen(r.gen_range(0..env.rank()))).collect();
            words.push(FreeWord::new(random_base_poly(r, env.algebroid()), gens));
        }
        let e = env.normal_form_sum(&words).expect("valid words");
        if e.order() == Some(order) {
            return e;
        }
    }
}

/// A random kernel with the given fiber dimensions; about a third of the
/// entries vanish.
pub fn random_kernel(r: &mut impl Rng, g: &FiniteGroupoid, dims: &[usize]) -> ReducedKernel {
    let values = (0..g.arrow_count())
        .map(|a| {
            let (rows, cols) = (dims[g.range(a)], dims[g.source(a)]);
            let mut m = QMatrix::zeros(rows, cols);
            if r.gen_bool(0.66) {
                for i in 0..rows {
                    for j in 0..cols {
                        if r.gen_bool(0.8) {
                            m[(i, j)] = small_rational(r);
                        }
                    }
                }
            }
            m
        })
        .collect();
    ReducedKernel::new(g, dims.to_vec(), values).expect("shapes match")
}

/// The strategy that picks a uniformly random redex.
pub fn random_strategy(seed: u64) -> impl FnMut(&[lie_algebroid::uea::Redex]) -> usize {
    let mut r = rng(seed);
    move |redexes| r.gen_range(0..redexes.len())
}
