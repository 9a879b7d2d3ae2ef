//! Exact symbolic computation with trivialized Lie algebroids, their
//! enveloping algebras in PBW normal form, Lie-Poisson brackets and the
//! adiabatic star product, together with finite groupoids and their
//! convolution algebras. All arithmetic is over the rationals.

pub mod algebroid;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod groupoid;
pub mod poly;
pub mod schema;
pub mod uea;

pub use algebroid::{Algebroid, AxiomReport, Section};
pub use error::Error;
pub use groupoid::{
    EquivariantBundle, FiniteGroup, FiniteGroupoid, GroupoidDefect, GroupoidReport, InvariantFamily,
    QMatrix, ReducedKernel,
};
pub use poly::{Monomial, Poly, Rational, Var};
pub use uea::{Enveloping, FreeWord, Letter, StarProduct, UeaElement};
