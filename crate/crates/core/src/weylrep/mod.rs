//! Exact Weyl-algebra engine for the infinitesimal Weil representation.

pub mod expr;
pub mod genfunc;
pub mod harmonic;
pub mod lie;
pub mod linalg;
pub mod operator;
pub mod pbw;
pub mod poly;
pub mod scalar;
pub mod suites;

pub use genfunc::GenFunction;
pub use lie::{lie_generator, Algebra, LieElement};
pub use operator::WeylOperator;
pub use poly::Polynomial;
pub use scalar::{ExactScalar, Rational, QI};
