//! Exact algebra of fuzzy processes and a verification toolkit built on it.
//!
//! A fuzzy process over a finite execution universe is a pair of membership
//! maps: how accessible each execution is to the device, and how acceptable it
//! is to the environment. This crate provides the process algebra
//! (product, sum, reflection, join, meet), refinement at membership and
//! support level, an exhaustive law harness, user-facing verification
//! procedures, and a small text format for writing specifications.
//!
//! The algebra is generic over [`Scalar`]; [`Rational`] is the intended
//! instantiation and [`Process`] the corresponding alias.

pub mod dsl;
pub mod engine;
pub mod error;
pub mod harness;
mod json;
mod level;
pub mod membership;
pub mod ops;
pub mod process;
pub mod rational;
pub mod scalar;
pub mod universe;

pub use error::CoreError;
pub use level::Level;
pub use membership::Membership;
pub use ops::Factorization;
pub use process::{CrispState, FuzzyProcess, Supports};
pub use scalar::Scalar;
pub use universe::ExecutionUniverse;

/// Exact membership scalar.
pub type Rational = num_rational::Ratio<i64>;

/// Membership degree over [`Rational`].
pub type Grade = Membership<Rational>;

/// Fuzzy process over [`Rational`] memberships.
pub type Process = FuzzyProcess<Rational>;
