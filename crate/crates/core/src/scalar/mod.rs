//! Scalars: Gaussian rationals, j-monomials, truncated series in `v` and
//! closed-form hyperbolic expressions.

pub mod assignment;
pub mod expr;
pub mod gaussian;
pub mod monomial;
pub mod render;
pub mod series;

pub use assignment::{JAssignment, JValue, UndefinedContraction};
pub use expr::{Atom, Product, ScalarExpr, Trig};
pub use gaussian::GaussianRational;
pub use monomial::{JMonomial, JPolynomial, MAX_PARAMS};
pub use series::{SeriesCtx, SeriesJson, VSeries};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("series truncation orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("negative power of a non-monomial expression: {0}")]
    IllFormedNegativePower(String),
    #[error("malformed scalar: {0}")]
    Malformed(String),
    #[error(transparent)]
    Undefined(#[from] UndefinedContraction),
}
