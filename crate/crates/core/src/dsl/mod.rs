//! The `.fps` specification format.
//!
//! A line-oriented text format declaring one execution universe, named
//! processes, expression bindings, assertions, and queries:
//!
//! ```text
//! universe a b
//! process p
//!   delta a=1 b=1/2
//!   gamma a=0.5 b=1
//! end
//! let q = -p * OMEGA
//! assert refines p q
//! query factor p
//! ```

mod ast;
mod parser;

use std::fmt;

pub use ast::{BinOp, Document, Environment, Expr, Query, Statement};
pub use parser::{parse, parse_expression};

/// A parse or validation error pointing at the first offending character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceError {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    pub message: String,
    pub token: String,
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.token.is_empty() {
            write!(f, " (at `{}`)", self.token)?;
        }
        Ok(())
    }
}

impl std::error::Error for SourceError {}
