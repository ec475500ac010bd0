//! Operator-splitting solvers for basis pursuit and its ℓ²-regularized form,
//! together with the principal-angle theory that predicts their asymptotic
//! linear convergence rates.

pub mod angle_estimation;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod operators;
pub mod problem;
pub mod rate_theory;
pub mod solvers;

pub use error::{Error, Result};
pub use problem::{ProblemInstance, SupportInfo};
