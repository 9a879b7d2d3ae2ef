use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{var}` is outside the universe of this {context}")]
    Universe { var: String, context: &'static str },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("generator e{0} does not exist")]
    UnknownGenerator(usize),
    #[error("invalid algebroid: {0}")]
    InvalidAlgebroid(String),
    #[error("algebroid is already adiabatic")]
    AlreadyAdiabatic,
    #[error("elements belong to different algebroids")]
    AlgebroidMismatch,
    #[error("element has order {order}, above the requested {requested}")]
    OrderTooHigh { order: usize, requested: usize },
    #[error("rewriting exceeded {0} steps")]
    RewriteLimit(usize),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invariance violated at g = {g}, h = {h}, h' = {h_prime}")]
    Invariance {
        g: String,
        h: String,
        h_prime: String,
    },
    #[error("invalid equivariant bundle: {0}")]
    InvalidBundle(String),
    #[error("schema error: {0}")]
    Schema(String),
}
