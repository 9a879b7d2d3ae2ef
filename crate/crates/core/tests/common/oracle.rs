//! Brute-force model of `U(g)` for a Lie algebra given by constant structure
//! constants. Words are rewritten with `e_j e_i -> e_i e_j + [e_j, e_i]`
//! along every possible rewrite order; the set of reachable normal forms is
//! returned so that a test can check it is a single element. Symmetrization
//! averages over all permutations of a word.

use std::collections::{BTreeMap, HashMap};

use lie_algebroid::poly::{Poly, Rational};

/// Linear combination of generator words with coefficients in `Q[t]`.
pub type Combo = BTreeMap<Vec<usize>, Poly>;

pub struct LieOracle {
    n: usize,
    /// `bracket[j][i]` is `[e_j, e_i]` as a list of `(k, coefficient)`.
    bracket: Vec<Vec<Vec<(usize, Poly)>>>,
    memo: HashMap<Vec<usize>, Vec<Combo>>,
}

fn add(c: &mut Combo, w: Vec<usize>, coeff: &Poly) {
    let e = c.entry(w).or_insert_with(Poly::zero);
    *e += coeff;
    c.retain(|_, v| !v.is_zero());
}

impl LieOracle {
    /// `entries` lists `[e_i, e_j] = c e_k` for `i < j`, zero-based; every
    /// bracket is multiplied by `scale` (use `t` for the adiabatic algebra).
    pub fn new(n: usize, entries: &[(usize, usize, usize, i64)], scale: &Poly) -> Self {
        let mut bracket = vec![vec![Vec::new(); n]; n];
        for &(i, j, k, c) in entries {
            let c = &Poly::int(c) * scale;
            bracket[i][j].push((k, c.clone()));
            bracket[j][i].push((k, -&c));
        }
        LieOracle {
            n,
            bracket,
            memo: HashMap::new(),
        }
    }

    /// Every normal form reachable from `word` by some rewrite order.
    pub fn normal_forms(&mut self, word: &[usize]) -> Vec<Combo> {
        if let Some(hit) = self.memo.get(word) {
            return hit.clone();
        }
        let descents: Vec<usize> = (0..word.len().saturating_sub(1))
            .filter(|&p| word[p] > word[p + 1])
            .collect();
        let mut results: Vec<Combo> = Vec::new();
        if descents.is_empty() {
            results.push(Combo::from([(word.to_vec(), Poly::one())]));
        }
        for p in descents {
            let (j, i) = (word[p], word[p + 1]);
            let mut swapped = word.to_vec();
            swapped.swap(p, p + 1);
            let mut pieces = vec![(swapped, Poly::one())];
            for (k, c) in self.bracket[j][i].clone() {
                let mut w = word[..p].to_vec();
                w.push(k);
                w.extend_from_slice(&word[p + 2..]);
                pieces.push((w, c));
            }
            // all combinations of reachable normal forms of the pieces
            let mut partial: Vec<Combo> = vec![Combo::new()];
            for (w, c) in pieces {
                let options = self.normal_forms(&w);
                let mut next = Vec::new();
                for base in &partial {
                    for opt in &options {
                        let mut sum = base.clone();
                        for (v, coeff) in opt {
                            add(&mut sum, v.clone(), &(coeff * &c));
                        }
                        if !next.contains(&sum) {
                            next.push(sum);
                        }
                    }
                }
                partial = next;
            }
            for r in partial {
                if !results.contains(&r) {
                    results.push(r);
                }
            }
        }
        self.memo.insert(word.to_vec(), results.clone());
        results
    }

    /// The normal form of a combination, requiring a unique answer.
    pub fn normalize(&mut self, combo: &Combo) -> Combo {
        let mut out = Combo::new();
        for (w, c) in combo {
            let forms = self.normal_forms(w);
            assert_eq!(forms.len(), 1, "rewriting of {w:?} is not confluent");
            for (v, coeff) in &forms[0] {
                add(&mut out, v.clone(), &(coeff * c));
            }
        }
        out
    }

    /// `(1/|w|!) sum over permutations` of the word `e^alpha`.
    pub fn symmetrized(&mut self, alpha: &[u32]) -> Combo {
        let letters: Vec<usize> = alpha
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| std::iter::repeat(i).take(a as usize))
            .collect();
        let perms = permutations(&letters);
        let weight = Poly::constant(Rational::new(1.into(), (perms.len() as i64).into()));
        let mut combo = Combo::new();
        for p in perms {
            add(&mut combo, p, &weight);
        }
        self.normalize(&combo)
    }

    /// `h(t) xi^alpha` summed, quantized.
    pub fn quantize(&mut self, f: &BTreeMap<Vec<u32>, Poly>) -> Combo {
        let mut out = Combo::new();
        for (alpha, h) in f {
            for (w, c) in self.symmetrized(alpha) {
                add(&mut out, w, &(h * &c));
            }
        }
        out
    }

    /// Symbol by back-substitution: repeatedly remove the top-degree part.
    pub fn symbol(&mut self, combo: &Combo) -> BTreeMap<Vec<u32>, Poly> {
        let mut rest = self.normalize(combo);
        let mut out: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        while let Some(top) = rest.keys().map(Vec::len).max() {
            let (w, c) = rest
                .iter()
                .find(|(w, _)| w.len() == top)
                .map(|(w, c)| (w.clone(), c.clone()))
                .expect("nonempty");
            let alpha = self.multi_index(&w);
            for (v, coeff) in self.symmetrized(&alpha) {
                add(&mut rest, v, &-(&coeff * &c));
            }
            let e = out.entry(alpha).or_insert_with(Poly::zero);
            *e += &c;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Product of two combinations: concatenate words, then normalize.
    pub fn multiply(&mut self, a: &Combo, b: &Combo) -> Combo {
        let mut out = Combo::new();
        for (u, c) in a {
            for (v, d) in b {
                let mut w = u.clone();
                w.extend_from_slice(v);
                add(&mut out, w, &(c * d));
            }
        }
        self.normalize(&out)
    }

    pub fn multi_index(&self, word: &[usize]) -> Vec<u32> {
        let mut alpha = vec![0; self.n];
        for &i in word {
            alpha[i] += 1;
        }
        alpha
    }

    /// The star product of two fiber polynomials with coefficients in `Q[t]`.
    pub fn star(
        &mut self,
        f: &BTreeMap<Vec<u32>, Poly>,
        g: &BTreeMap<Vec<u32>, Poly>,
    ) -> BTreeMap<Vec<u32>, Poly> {
        let qf = self.quantize(f);
        let qg = self.quantize(g);
        let prod = self.multiply(&qf, &qg);
        self.symbol(&prod)
    }
}

fn permutations(letters: &[usize]) -> Vec<Vec<usize>> {
    if letters.len() <= 1 {
        return vec![letters.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..letters.len() {
        let mut rest = letters.to_vec();
        let first = rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

/// Reads a sorted word combination as multi-index coefficients.
pub fn by_multi_index(oracle: &LieOracle, c: &Combo) -> BTreeMap<Vec<u32>, Poly> {
    c.iter()
        .map(|(w, coeff)| (oracle.multi_index(w), coeff.clone()))
        .collect()
}

/// The fiber polynomial `sum coeff * xi^alpha`.
pub fn fiber_poly(f: &BTreeMap<Vec<u32>, Poly>) -> Poly {
    let mut out = Poly::zero();
    for (alpha, c) in f {
        let mut m = Poly::one();
        for (i, &a) in alpha.iter().enumerate() {
            m = &m * &Poly::xi(i as u32).pow(a);
        }
        out += &(c * &m);
    }
    out
}
