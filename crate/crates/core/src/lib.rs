//! Symbolic computation of Zhu algebras of vertex algebras given by
//! C1-generators, C1-relations and singular vectors.

pub mod calculus;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod parallel;
pub mod presentation;
pub mod quotient;
pub mod reduction;
pub mod scalar;
pub mod syntax;
pub mod terms;
pub mod zhu;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use terms::{ModeOp, Signature, State, Word};
