//! Equivariant bundles and the representation of reduced kernels on their
//! sections.

use num_traits::Zero;

use super::{FiniteGroupoid, QMatrix, ReducedKernel};
use crate::error::Error;
use crate::poly::Rational;

/// A bundle `V` over the units with a linear action `rho(g): V_{d(g)} -> V_{r(g)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantBundle {
    dims: Vec<usize>,
    rho: Vec<QMatrix>,
}

impl EquivariantBundle {
    /// Validates shapes, `rho(unit) = 1` and `rho(gh) = rho(g) rho(h)`.
    pub fn new(g: &FiniteGroupoid, dims: Vec<usize>, rho: Vec<QMatrix>) -> Result<Self, Error> {
        if dims.len() != g.unit_count() || dims.contains(&0) {
            return Err(Error::InvalidBundle("one positive dimension per unit".into()));
        }
        if rho.len() != g.arrow_count() {
            return Err(Error::InvalidBundle(format!(
                "{} matrices for {} arrows",
                rho.len(),
                g.arrow_count()
            )));
        }
        for (a, m) in rho.iter().enumerate() {
            if m.shape() != (dims[g.range(a)], dims[g.source(a)]) {
                return Err(Error::InvalidBundle(format!(
                    "rho({}) has the wrong shape",
                    g.arrow_name(a)
                )));
            }
        }
        for x in 0..g.unit_count() {
            if rho[g.unit_arrow(x)] != QMatrix::identity(dims[x]) {
                return Err(Error::InvalidBundle(format!(
                    "rho of the unit at {} is not the identity",
                    g.unit_name(x)
                )));
            }
        }
        for (a, b) in g.composable_pairs() {
            if rho[g.compose(a, b)] != &rho[a] * &rho[b] {
                return Err(Error::InvalidBundle(format!(
                    "rho({}{}) != rho({}) rho({})",
                    g.arrow_name(a),
                    g.arrow_name(b),
                    g.arrow_name(a),
                    g.arrow_name(b)
                )));
            }
        }
        Ok(EquivariantBundle { dims, rho })
    }

    /// The trivial line bundle.
    pub fn trivial(g: &FiniteGroupoid) -> Self {
        EquivariantBundle {
            dims: vec![1; g.unit_count()],
            rho: vec![QMatrix::identity(1); g.arrow_count()],
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn rho(&self, a: usize) -> &QMatrix {
        &self.rho[a]
    }
}

impl FiniteGroupoid {
    /// `(pi(f) phi)(x) = sum_{h in G_x} (f(h^-1) ⊗ rho(h^-1)) phi(r(h))`.
    ///
    /// `phi[x]` has length `E_x * V_x`, index `e * V_x + v`.
    pub fn represent(
        &self,
        f: &ReducedKernel,
        bundle: &EquivariantBundle,
        phi: &[Vec<Rational>],
    ) -> Result<Vec<Vec<Rational>>, Error> {
        f.validate(self)?;
        self.check_bundle(bundle)?;
        if phi.len() != self.unit_count() {
            return Err(Error::Dimension("one section value per unit".into()));
        }
        let fiber = |x: usize| f.dims()[x] * bundle.dims[x];
        for (x, v) in phi.iter().enumerate() {
            if v.len() != fiber(x) {
                return Err(Error::Dimension(format!(
                    "section value at {} has length {}, expected {}",
                    self.unit_name(x),
                    v.len(),
                    fiber(x)
                )));
            }
        }
        let mut out: Vec<Vec<Rational>> =
            (0..self.unit_count()).map(|x| vec![Rational::zero(); fiber(x)]).collect();
        for x in 0..self.unit_count() {
            for h in self.source_fiber(x) {
                let hinv = self.inverse(h);
                let op = f.value(hinv).kron(&bundle.rho[hinv]);
                let contrib = op.apply(&phi[self.range(h)])?;
                for (o, c) in out[x].iter_mut().zip(contrib) {
                    *o += c;
                }
            }
        }
        Ok(out)
    }

    /// The matrix of `pi(f)` on sections laid out unit by unit.
    pub fn represent_matrix(
        &self,
        f: &ReducedKernel,
        bundle: &EquivariantBundle,
    ) -> Result<QMatrix, Error> {
        f.validate(self)?;
        self.check_bundle(bundle)?;
        let sizes: Vec<usize> = (0..self.unit_count())
            .map(|x| f.dims()[x] * bundle.dims[x])
            .collect();
        let offsets: Vec<usize> = sizes
            .iter()
            .scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect();
        let total = sizes.iter().sum();
        let mut m = QMatrix::zeros(total, total);
        for x in 0..self.unit_count() {
            for h in self.source_fiber(x) {
                let hinv = self.inverse(h);
                let y = self.range(h);
                let op = f.value(hinv).kron(&bundle.rho[hinv]);
                let mut block = m.block(offsets[x], offsets[y], sizes[x], sizes[y]);
                block.add_assign_checked(&op)?;
                m.set_block(offsets[x], offsets[y], &block);
            }
        }
        Ok(m)
    }

    fn check_bundle(&self, bundle: &EquivariantBundle) -> Result<(), Error> {
        if bundle.dims.len() != self.unit_count() || bundle.rho.len() != self.arrow_count() {
            return Err(Error::InvalidBundle("bundle belongs to another groupoid".into()));
        }
        Ok(())
    }
}
