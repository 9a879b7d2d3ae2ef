//! Reduced kernels, invariant families and the correspondence between them.

use super::{FiniteGroupoid, QMatrix};
use crate::error::Error;
use crate::poly::Rational;

/// A section of `Hom(d*E, r*E)` over the arrows: `values[g]` is a
/// `dims[r(g)] x dims[d(g)]` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedKernel {
    dims: Vec<usize>,
    values: Vec<QMatrix>,
}

impl ReducedKernel {
    pub fn new(g: &FiniteGroupoid, dims: Vec<usize>, values: Vec<QMatrix>) -> Result<Self, Error> {
        let k = ReducedKernel { dims, values };
        k.validate(g)?;
        Ok(k)
    }

    /// A kernel with one-dimensional fibers.
    pub fn scalar(g: &FiniteGroupoid, values: Vec<Rational>) -> Result<Self, Error> {
        let dims = vec![1; g.unit_count()];
        ReducedKernel::new(g, dims, values.into_iter().map(QMatrix::scalar).collect())
    }

    pub fn zero(g: &FiniteGroupoid, dims: Vec<usize>) -> Result<Self, Error> {
        let values = (0..g.arrow_count())
            .map(|a| QMatrix::zeros(dims.get(g.range(a)).copied().unwrap_or(0), dims.get(g.source(a)).copied().unwrap_or(0)))
            .collect();
        ReducedKernel::new(g, dims, values)
    }

    /// The unit of the convolution algebra: identity blocks on unit arrows.
    pub fn unit(g: &FiniteGroupoid, dims: Vec<usize>) -> Result<Self, Error> {
        let mut k = ReducedKernel::zero(g, dims)?;
        for x in 0..g.unit_count() {
            k.values[g.unit_arrow(x)] = QMatrix::identity(k.dims[x]);
        }
        Ok(k)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn value(&self, a: usize) -> &QMatrix {
        &self.values[a]
    }

    pub fn values(&self) -> &[QMatrix] {
        &self.values
    }

    pub fn is_scalar(&self) -> bool {
        self.dims.iter().all(|&d| d == 1)
    }

    /// Arrows where the kernel does not vanish.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&a| !self.values[a].is_zero()).collect()
    }

    pub fn validate(&self, g: &FiniteGroupoid) -> Result<(), Error> {
        if self.dims.len() != g.unit_count() {
            return Err(Error::Dimension(format!(
                "{} fiber dimensions for {} units",
                self.dims.len(),
                g.unit_count()
            )));
        }
        if self.dims.contains(&0) {
            return Err(Error::Dimension("fiber dimensions must be positive".into()));
        }
        if self.values.len() != g.arrow_count() {
            return Err(Error::Dimension(format!(
                "{} kernel values for {} arrows",
                self.values.len(),
                g.arrow_count()
            )));
        }
        for (a, v) in self.values.iter().enumerate() {
            let want = (self.dims[g.range(a)], self.dims[g.source(a)]);
            if v.shape() != want {
                return Err(Error::Dimension(format!(
                    "value at {} is {}x{}, expected {}x{}",
                    g.arrow_name(a),
                    v.rows(),
                    v.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(())
    }
}

/// A family `(P_x)` of operators on the source fibers `G_x = d^{-1}(x)`.
/// `blocks[x][i][j]` is the block `k_x(h_i, h_j)` mapping `E_{r(h_j)}` to
/// `E_{r(h_i)}`, where `h_0, h_1, ...` enumerate `G_x` in arrow order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFamily {
    dims: Vec<usize>,
    fibers: Vec<Vec<usize>>,
    blocks: Vec<Vec<Vec<QMatrix>>>,
}

impl InvariantFamily {
    /// Builds a family from explicit blocks; shapes are checked, invariance
    /// is not (see [`InvariantFamily::check_invariance`]).
    pub fn new(
        g: &FiniteGroupoid,
        dims: Vec<usize>,
        blocks: Vec<Vec<Vec<QMatrix>>>,
    ) -> Result<Self, Error> {
        if dims.len() != g.unit_count() || dims.contains(&0) {
            return Err(Error::Dimension("one positive fiber dimension per unit".into()));
        }
        let fibers: Vec<Vec<usize>> = (0..g.unit_count()).map(|x| g.source_fiber(x)).collect();
        if blocks.len() != fibers.len() {
            return Err(Error::Dimension("one block matrix per unit".into()));
        }
        for (x, fiber) in fibers.iter().enumerate() {
            let b = &blocks[x];
            if b.len() != fiber.len() || b.iter().any(|row| row.len() != fiber.len()) {
                return Err(Error::Dimension(format!(
                    "family at unit {} must be {} x {} blocks",
                    g.unit_name(x),
                    fiber.len(),
                    fiber.len()
                )));
            }
            for (i, &hi) in fiber.iter().enumerate() {
                for (j, &hj) in fiber.iter().enumerate() {
                    let want = (dims[g.range(hi)], dims[g.range(hj)]);
                    if b[i][j].shape() != want {
                        return Err(Error::Dimension(format!(
                            "block ({}, {}) at unit {} has the wrong shape",
                            g.arrow_name(hi),
                            g.arrow_name(hj),
                            g.unit_name(x)
                        )));
                    }
                }
            }
        }
        Ok(InvariantFamily {
            dims,
            fibers,
            blocks,
        })
    }

    /// `P_x = identity` on every fiber.
    pub fn identity(g: &FiniteGroupoid, dims: Vec<usize>) -> Result<Self, Error> {
        let blocks = (0..g.unit_count())
            .map(|x| {
                let fiber = g.source_fiber(x);
                fiber
                    .iter()
                    .map(|&hi| {
                        fiber
                            .iter()
                            .map(|&hj| {
                                let (r, c) = (
                                    dims.get(g.range(hi)).copied().unwrap_or(0),
                                    dims.get(g.range(hj)).copied().unwrap_or(0),
                                );
                                if hi == hj {
                                    QMatrix::identity(r)
                                } else {
                                    QMatrix::zeros(r, c)
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        InvariantFamily::new(g, dims, blocks)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// The arrows of `G_x` in the order used for rows and columns.
    pub fn fiber(&self, x: usize) -> &[usize] {
        &self.fibers[x]
    }

    pub fn block(&self, x: usize, i: usize, j: usize) -> &QMatrix {
        &self.blocks[x][i][j]
    }

    fn position(&self, x: usize, h: usize) -> usize {
        self.fibers[x]
            .iter()
            .position(|&a| a == h)
            .expect("arrow lies in the fiber")
    }

    /// `k_x(h', h)` by arrow indices.
    pub fn entry(&self, x: usize, h_prime: usize, h: usize) -> &QMatrix {
        &self.blocks[x][self.position(x, h_prime)][self.position(x, h)]
    }

    /// `P_x` assembled into one matrix.
    pub fn operator(&self, g: &FiniteGroupoid, x: usize) -> QMatrix {
        let fiber = &self.fibers[x];
        let offsets: Vec<usize> = fiber
            .iter()
            .scan(0, |acc, &h| {
                let o = *acc;
                *acc += self.dims[g.range(h)];
                Some(o)
            })
            .collect();
        let size: usize = fiber.iter().map(|&h| self.dims[g.range(h)]).sum();
        let mut m = QMatrix::zeros(size, size);
        for i in 0..fiber.len() {
            for j in 0..fiber.len() {
                m.set_block(offsets[i], offsets[j], &self.blocks[x][i][j]);
            }
        }
        m
    }

    /// Checks `k_{r(g)}(h', h) = k_{d(g)}(h'g, hg)` for every arrow `g` and
    /// all `h, h'` in `G_{r(g)}`.
    pub fn check_invariance(&self, g: &FiniteGroupoid) -> Result<(), Error> {
        for a in 0..g.arrow_count() {
            let (src, rng) = (g.source(a), g.range(a));
            for &hp in &self.fibers[rng] {
                for &h in &self.fibers[rng] {
                    let moved = self.entry(src, g.compose(hp, a), g.compose(h, a));
                    if self.entry(rng, hp, h) != moved {
                        return Err(Error::Invariance {
                            g: g.arrow_name(a).to_string(),
                            h: g.arrow_name(h).to_string(),
                            h_prime: g.arrow_name(hp).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

impl FiniteGroupoid {
    /// `(f1 * f2)(g) = sum_{h1 h2 = g} f1(h1) f2(h2)`.
    pub fn convolve(&self, f1: &ReducedKernel, f2: &ReducedKernel) -> Result<ReducedKernel, Error> {
        f1.validate(self)?;
        f2.validate(self)?;
        if f1.dims != f2.dims {
            return Err(Error::Dimension("kernels have different fiber dimensions".into()));
        }
        let mut out = ReducedKernel::zero(self, f1.dims.clone())?;
        for (h1, h2) in self.composable_pairs() {
            let v1 = &f1.values[h1];
            let v2 = &f2.values[h2];
            if v1.is_zero() || v2.is_zero() {
                continue;
            }
            let g = self.compose(h1, h2);
            out.values[g].add_assign_checked(&v1.try_mul(v2)?)?;
        }
        Ok(out)
    }

    /// `k_x(h', h) = k(h' h^{-1})`.
    pub fn family_from_kernel(&self, k: &ReducedKernel) -> Result<InvariantFamily, Error> {
        k.validate(self)?;
        let blocks = (0..self.unit_count())
            .map(|x| {
                let fiber = self.source_fiber(x);
                fiber
                    .iter()
                    .map(|&hp| {
                        fiber
                            .iter()
                            .map(|&h| k.values[self.compose(hp, self.inverse(h))].clone())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        InvariantFamily::new(self, k.dims.clone(), blocks)
    }

    /// `k(g) = k_{d(g)}(g, d(g))`, after verifying invariance.
    pub fn kernel_from_family(&self, p: &InvariantFamily) -> Result<ReducedKernel, Error> {
        p.check_invariance(self)?;
        let values = (0..self.arrow_count())
            .map(|a| {
                let x = self.source(a);
                p.entry(x, a, self.unit_arrow(x)).clone()
            })
            .collect();
        ReducedKernel::new(self, p.dims.clone(), values)
    }

    /// Fiberwise composition `(PQ)_x = P_x Q_x`; the result is re-checked for
    /// invariance.
    pub fn compose_families(
        &self,
        p: &InvariantFamily,
        q: &InvariantFamily,
    ) -> Result<InvariantFamily, Error> {
        if p.dims != q.dims {
            return Err(Error::Dimension("families have different fiber dimensions".into()));
        }
        let mut blocks = Vec::with_capacity(self.unit_count());
        for x in 0..self.unit_count() {
            let fiber = &p.fibers[x];
            let mut bx = Vec::with_capacity(fiber.len());
            for i in 0..fiber.len() {
                let mut row = Vec::with_capacity(fiber.len());
                for j in 0..fiber.len() {
                    let mut acc = QMatrix::zeros(p.dims[self.range(fiber[i])], p.dims[self.range(fiber[j])]);
                    for l in 0..fiber.len() {
                        let term = p.blocks[x][i][l].try_mul(&q.blocks[x][l][j])?;
                        acc.add_assign_checked(&term)?;
                    }
                    row.push(acc);
                }
                bx.push(row);
            }
            blocks.push(bx);
        }
        let out = InvariantFamily::new(self, p.dims.clone(), blocks)?;
        out.check_invariance(self)?;
        Ok(out)
    }

    /// `{g1 g2 : g1 in S1, g2 in S2 composable}`, sorted.
    pub fn support_product(&self, s1: &[usize], s2: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = s1
            .iter()
            .flat_map(|&a| s2.iter().filter_map(move |&b| self.product(a, b)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
