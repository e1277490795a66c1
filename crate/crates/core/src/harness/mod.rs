//! Exhaustive verification of the algebra's laws over small domains.

mod check;
mod enumerate;
pub mod laws;
pub mod manifest;

use thiserror::Error;

use crate::error::CoreError;

pub use check::{
    check_law, classification_domains, classify_over, classify_preconditions, evaluate,
    DomainOutcome, HarnessConfig, LawReport, PreconditionClass, DEFAULT_BUDGET,
};
pub use enumerate::{enumerate, DomainSpec, EnumerationDomain, ProcessEnumerator};
pub use laws::{registry, Law, LawContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("budget exceeded: {what} needs {required} evaluations, budget is {budget}")]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u128,
    },

    #[error("cannot replay a law without arguments")]
    MissingUniverse,

    #[error(transparent)]
    Core(#[from] CoreError),
}
