//! Trivialized Lie algebroids over a single polynomial chart.
//!
//! A frame `e1..en` of `A` is fixed. The anchor sends `e_i` to the vector
//! field `sum_a rho[i][a](x) d/dx_a` and the bracket is determined by the
//! structure functions `[e_i, e_j] = sum_k c(i,j,k)(x) e_k`. Functions on `A*`
//! that are polynomial along the fibers are [`Poly`] values in `x`, `xi` and,
//! for adiabatic algebroids, `t`.

use std::collections::HashMap;
use std::fmt;

use crate::error::Error;
use crate::poly::{Poly, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebroid {
    base_dim: usize,
    rank: usize,
    /// `rank` rows of `base_dim` entries.
    anchor: Vec<Vec<Poly>>,
    /// Flattened `rank^3` array indexed by `(i * rank + j) * rank + k`.
    structure: Vec<Poly>,
    adiabatic: bool,
}

/// A section `sum_i s_i(x) e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section(pub Vec<Poly>);

impl Section {
    pub fn zero(rank: usize) -> Self {
        Section(vec![Poly::zero(); rank])
    }

    /// The frame section `e_i`.
    pub fn frame(rank: usize, i: usize) -> Self {
        let mut s = Section::zero(rank);
        s.0[i] = Poly::one();
        s
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, f: &Poly) -> Section {
        Section(self.0.iter().map(|c| c * f).collect())
    }

    pub fn add(&self, other: &Section) -> Section {
        Section(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }

    /// The fiberwise-linear function `sum_i s_i(x) xi_i` on `A*`.
    pub fn to_fiber_poly(&self) -> Poly {
        let mut out = Poly::zero();
        for (i, c) in self.0.iter().enumerate() {
            out += &(c * &Poly::xi(i as u32));
        }
        out
    }

    /// Inverse of [`Section::to_fiber_poly`]; fails unless `f` is linear
    /// along the fibers.
    pub fn from_fiber_poly(rank: usize, f: &Poly) -> Result<Self, Error> {
        let mut s = Section::zero(rank);
        for (m, coeff) in f.collect_by(Var::is_fiber) {
            let fiber: Vec<_> = m.iter().collect();
            match fiber.as_slice() {
                [(Var::Xi(i), 1)] if (*i as usize) < rank => s.0[*i as usize] = coeff,
                _ => {
                    return Err(Error::Parse(format!(
                        "`{f}` is not a section (fiber-linear in xi1..xi{rank})"
                    )))
                }
            }
        }
        Ok(s)
    }
}

/// Outcome of [`Algebroid::check_axioms`]. Indices are zero-based; the
/// `Display` impl prints them one-based.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    /// `(i, j, k)` with `c(i,j,k) + c(j,i,k) != 0`, `i <= j`.
    pub antisymmetry: Vec<(usize, usize, usize)>,
    /// Every pair `i < j` and whether `rho([e_i,e_j]) = [rho(e_i), rho(e_j)]`.
    pub anchor_morphism: Vec<((usize, usize), bool)>,
    /// Every triple `i < j < l` and whether the Jacobiator vanishes.
    pub jacobi: Vec<((usize, usize, usize), bool)>,
}

impl AxiomReport {
    pub fn antisymmetry_ok(&self) -> bool {
        self.antisymmetry.is_empty()
    }

    pub fn anchor_ok(&self) -> bool {
        self.anchor_morphism.iter().all(|(_, ok)| *ok)
    }

    pub fn jacobi_ok(&self) -> bool {
        self.jacobi.iter().all(|(_, ok)| *ok)
    }

    pub fn passed(&self) -> bool {
        self.antisymmetry_ok() && self.anchor_ok() && self.jacobi_ok()
    }

    pub fn anchor_failures(&self) -> Vec<(usize, usize)> {
        self.anchor_morphism
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(ij, _)| *ij)
            .collect()
    }

    pub fn jacobi_failures(&self) -> Vec<(usize, usize, usize)> {
        self.jacobi
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(ijl, _)| *ijl)
            .collect()
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "antisymmetry: {}", status(self.antisymmetry_ok()))?;
        for (i, j, k) in &self.antisymmetry {
            write!(f, " ({},{},{})", i + 1, j + 1, k + 1)?;
        }
        write!(f, "\nanchor: {}", status(self.anchor_ok()))?;
        for (i, j) in self.anchor_failures() {
            write!(f, " ({},{})", i + 1, j + 1)?;
        }
        write!(f, "\njacobi: {}", status(self.jacobi_ok()))?;
        for (i, j, l) in self.jacobi_failures() {
            write!(f, " ({},{},{})", i + 1, j + 1, l + 1)?;
        }
        Ok(())
    }
}

impl Algebroid {
    /// Builds an algebroid from its anchor and the structure functions
    /// `c(i,j,k)` for `i < j` (zero-based); the rest of the array is filled in
    /// by antisymmetry. Omitted entries are zero.
    pub fn new(
        base_dim: usize,
        rank: usize,
        anchor: Vec<Vec<Poly>>,
        upper: impl IntoIterator<Item = (usize, usize, usize, Poly)>,
    ) -> Result<Self, Error> {
        let mut structure = vec![Poly::zero(); rank * rank * rank];
        for (i, j, k, c) in upper {
            if i >= j {
                return Err(Error::InvalidAlgebroid(format!(
                    "structure entry ({},{},{}) must have i < j",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            if j >= rank || k >= rank {
                return Err(Error::InvalidAlgebroid(format!(
                    "structure entry ({},{},{}) out of range for rank {rank}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            structure[(j * rank + i) * rank + k] = -&c;
            structure[(i * rank + j) * rank + k] = c;
        }
        Self::from_structure_array(base_dim, rank, anchor, structure)
    }

    /// Builds an algebroid from a complete `rank^3` structure array without
    /// imposing antisymmetry, so that defective input can be diagnosed by
    /// [`Algebroid::check_axioms`].
    pub fn from_structure_array(
        base_dim: usize,
        rank: usize,
        anchor: Vec<Vec<Poly>>,
        structure: Vec<Poly>,
    ) -> Result<Self, Error> {
        if rank == 0 {
            return Err(Error::InvalidAlgebroid("rank must be positive".into()));
        }
        if anchor.len() != rank || anchor.iter().any(|row| row.len() != base_dim) {
            return Err(Error::InvalidAlgebroid(format!(
                "anchor must be a {rank} x {base_dim} matrix"
            )));
        }
        if structure.len() != rank * rank * rank {
            return Err(Error::InvalidAlgebroid(format!(
                "structure array must have {} entries",
                rank * rank * rank
            )));
        }
        let adiabatic = anchor
            .iter()
            .flatten()
            .chain(&structure)
            .any(|p| p.vars().contains(&Var::T));
        let alg = Algebroid {
            base_dim,
            rank,
            anchor,
            structure,
            adiabatic,
        };
        for p in alg.anchor.iter().flatten().chain(&alg.structure) {
            alg.check_base_poly(p)?;
        }
        Ok(alg)
    }

    /// Marks the algebroid as living over `M x [0, inf)` so that its data may
    /// mention `t`.
    pub fn with_adiabatic_flag(mut self, adiabatic: bool) -> Result<Self, Error> {
        if !adiabatic {
            for p in self.anchor.iter().flatten().chain(&self.structure) {
                if p.vars().contains(&Var::T) {
                    return Err(Error::Universe {
                        var: "t".into(),
                        context: "non-adiabatic algebroid",
                    });
                }
            }
        }
        self.adiabatic = adiabatic;
        Ok(self)
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_adiabatic(&self) -> bool {
        self.adiabatic
    }

    pub fn anchor_entry(&self, i: usize, a: usize) -> &Poly {
        &self.anchor[i][a]
    }

    pub fn anchor_matrix(&self) -> &[Vec<Poly>] {
        &self.anchor
    }

    pub fn structure(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.structure[(i * self.rank + j) * self.rank + k]
    }

    /// The vector field `rho(e_i)` applied to `f`.
    pub fn anchor_apply(&self, i: usize, f: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, r) in self.anchor[i].iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let d = f.partial(Var::X(a as u32));
            if !d.is_zero() {
                out += &(r * &d);
            }
        }
        out
    }

    /// `rho(X) f` for a section `X`.
    pub fn anchor_apply_section(&self, x: &Section, f: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (i, xi) in x.0.iter().enumerate() {
            if !xi.is_zero() {
                out += &(xi * &self.anchor_apply(i, f));
            }
        }
        out
    }

    fn allowed(&self, v: Var, fiber: bool) -> bool {
        match v {
            Var::T => self.adiabatic,
            Var::X(a) => (a as usize) < self.base_dim,
            Var::Xi(i) => fiber && (i as usize) < self.rank,
        }
    }

    fn check_vars(&self, p: &Poly, fiber: bool, context: &'static str) -> Result<(), Error> {
        match p.vars().into_iter().find(|&v| !self.allowed(v, fiber)) {
            Some(v) => Err(Error::Universe {
                var: v.to_string(),
                context,
            }),
            None => Ok(()),
        }
    }

    /// Checks that `p` is a function on the base.
    pub fn check_base_poly(&self, p: &Poly) -> Result<(), Error> {
        self.check_vars(p, false, "algebroid base")
    }

    /// Checks that `p` is a fiberwise-polynomial function on `A*`.
    pub fn check_fiber_poly(&self, p: &Poly) -> Result<(), Error> {
        self.check_vars(p, true, "dual bundle")
    }

    pub fn check_section(&self, x: &Section) -> Result<(), Error> {
        if x.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: x.rank(),
            });
        }
        x.0.iter().try_for_each(|c| self.check_base_poly(c))
    }

    /// The bracket of two sections:
    /// `[X,Y]^k = sum X_i Y_j c(i,j,k) + sum X_i rho(e_i)(Y_k) - sum Y_j rho(e_j)(X_k)`.
    pub fn bracket(&self, x: &Section, y: &Section) -> Result<Section, Error> {
        self.check_section(x)?;
        self.check_section(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    fn bracket_unchecked(&self, x: &Section, y: &Section) -> Section {
        let n = self.rank;
        let mut out = Section::zero(n);
        for i in 0..n {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y.0[j].is_zero() {
                    continue;
                }
                let xy = &x.0[i] * &y.0[j];
                for k in 0..n {
                    let c = self.structure(i, j, k);
                    if !c.is_zero() {
                        out.0[k] += &(&xy * c);
                    }
                }
            }
        }
        for k in 0..n {
            out.0[k] += &self.anchor_apply_section(x, &y.0[k]);
            out.0[k] -= &self.anchor_apply_section(y, &x.0[k]);
        }
        out
    }

    /// Verifies antisymmetry, the anchor morphism property and the Jacobi
    /// identity on frame elements. Nothing is thrown; failures are listed.
    pub fn check_axioms(&self) -> AxiomReport {
        let n = self.rank;
        let mut report = AxiomReport::default();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let sum = self.structure(i, j, k) + self.structure(j, i, k);
                    if !sum.is_zero() {
                        report.antisymmetry.push((i, j, k));
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let ok = (0..self.base_dim).all(|a| {
                    // rho([e_i, e_j]) component a
                    let mut lhs = Poly::zero();
                    for k in 0..n {
                        lhs += &(self.structure(i, j, k) * &self.anchor[k][a]);
                    }
                    // [rho(e_i), rho(e_j)] component a
                    let rhs = self.anchor_apply(i, &self.anchor[j][a])
                        - self.anchor_apply(j, &self.anchor[i][a]);
                    lhs == rhs
                });
                report.anchor_morphism.push(((i, j), ok));
            }
        }
        let frame = |i| Section::frame(n, i);
        for i in 0..n {
            for j in (i + 1)..n {
                for l in (j + 1)..n {
                    let (a, b, c) = (frame(i), frame(j), frame(l));
                    let t1 = self.bracket_unchecked(&self.bracket_unchecked(&a, &b), &c);
                    let t2 = self.bracket_unchecked(&self.bracket_unchecked(&b, &c), &a);
                    let t3 = self.bracket_unchecked(&self.bracket_unchecked(&c, &a), &b);
                    let ok = t1.add(&t2).add(&t3).is_zero();
                    report.jacobi.push(((i, j, l), ok));
                }
            }
        }
        report
    }

    /// The Lie-Poisson bracket on fiberwise-polynomial functions on `A*`:
    /// `{xi_i, xi_j} = sum_k c(i,j,k) xi_k`, `{xi_i, h} = rho(e_i) h`,
    /// `{h, h'} = 0`, extended as a biderivation.
    pub fn poisson(&self, f: &Poly, g: &Poly) -> Result<Poly, Error> {
        self.check_fiber_poly(f)?;
        self.check_fiber_poly(g)?;
        Ok(self.poisson_unchecked(f, g))
    }

    pub(crate) fn poisson_unchecked(&self, f: &Poly, g: &Poly) -> Poly {
        let n = self.rank;
        let df: Vec<Poly> = (0..n).map(|i| f.partial(Var::Xi(i as u32))).collect();
        let dg: Vec<Poly> = (0..n).map(|i| g.partial(Var::Xi(i as u32))).collect();
        let mut out = Poly::zero();
        for i in 0..n {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if dg[j].is_zero() {
                    continue;
                }
                let mut lin = Poly::zero();
                for k in 0..n {
                    let c = self.structure(i, j, k);
                    if !c.is_zero() {
                        lin += &(c * &Poly::xi(k as u32));
                    }
                }
                if !lin.is_zero() {
                    out += &(&(&df[i] * &dg[j]) * &lin);
                }
            }
        }
        for i in 0..n {
            // rho(e_i) acting on the base dependence of the other argument
            if !df[i].is_zero() {
                out += &(&df[i] * &self.anchor_apply(i, g));
            }
            if !dg[i].is_zero() {
                out -= &(&dg[i] * &self.anchor_apply(i, f));
            }
        }
        out
    }

    /// The adiabatic algebroid `A_t`: anchor and structure functions scaled
    /// by `t`, with `t` central.
    pub fn adiabatic(&self) -> Result<Algebroid, Error> {
        if self.adiabatic {
            return Err(Error::AlreadyAdiabatic);
        }
        let t = Poly::t();
        Ok(Algebroid {
            base_dim: self.base_dim,
            rank: self.rank,
            anchor: self
                .anchor
                .iter()
                .map(|row| row.iter().map(|p| p * &t).collect())
                .collect(),
            structure: self.structure.iter().map(|p| p * &t).collect(),
            adiabatic: true,
        })
    }

    /// Specializes an adiabatic algebroid at a value of `t`.
    pub fn at_t(&self, value: &Poly) -> Result<Algebroid, Error> {
        let sub = HashMap::from([(Var::T, value.clone())]);
        let anchor = self
            .anchor
            .iter()
            .map(|row| row.iter().map(|p| p.substitute(&sub)).collect())
            .collect();
        let structure = self.structure.iter().map(|p| p.substitute(&sub)).collect();
        Algebroid::from_structure_array(self.base_dim, self.rank, anchor, structure)
    }

    /// The nonzero structure functions with `i < j`.
    pub fn upper_structure(&self) -> Vec<(usize, usize, usize, Poly)> {
        let n = self.rank;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let c = self.structure(i, j, k);
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }
}
