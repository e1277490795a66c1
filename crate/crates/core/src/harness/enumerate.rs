use std::fmt;
use std::sync::Arc;

use crate::membership::Membership;
use crate::process::FuzzyProcess;
use crate::scalar::Scalar;
use crate::universe::ExecutionUniverse;

use super::HarnessError;

/// A finite set of processes to quantify over.
///
/// Values come from the grid `{0, 1/k, ..., k/k}`; `k = 1` is the crisp
/// domain. With `total_only`, processes with a rejection are excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationDomain {
    pub universe: Arc<ExecutionUniverse>,
    pub grid: u32,
    pub total_only: bool,
}

impl EnumerationDomain {
    pub fn crisp(universe: Arc<ExecutionUniverse>) -> Self {
        Self::fuzzy(universe, 1)
    }

    pub fn fuzzy(universe: Arc<ExecutionUniverse>, grid: u32) -> Self {
        assert!(grid > 0, "grid resolution must be positive");
        Self {
            universe,
            grid,
            total_only: false,
        }
    }

    pub fn total(mut self) -> Self {
        self.total_only = true;
        self
    }

    pub fn unrestricted(mut self) -> Self {
        self.total_only = false;
        self
    }

    pub fn is_crisp(&self) -> bool {
        self.grid == 1
    }

    /// Number of `(δ, γ)` pairs available per label.
    pub fn states_per_label(&self) -> u128 {
        let values = u128::from(self.grid) + 1;
        values * values - u128::from(self.total_only)
    }

    /// Number of processes in the domain.
    pub fn size(&self) -> u128 {
        let exp = u32::try_from(self.universe.len()).unwrap_or(u32::MAX);
        self.states_per_label()
            .checked_pow(exp)
            .unwrap_or(u128::MAX)
    }

    pub fn spec(&self) -> DomainSpec {
        DomainSpec {
            universe_size: self.universe.len(),
            grid: self.grid,
            total_only: self.total_only,
        }
    }
}

/// Shape of a domain without the universe itself, used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DomainSpec {
    pub universe_size: usize,
    pub grid: u32,
    pub total_only: bool,
}

impl DomainSpec {
    pub fn domain(&self) -> EnumerationDomain {
        EnumerationDomain {
            universe: ExecutionUniverse::numbered(self.universe_size),
            grid: self.grid,
            total_only: self.total_only,
        }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.grid == 1 {
            f.write_str("crisp")?;
        } else {
            write!(f, "grid k={}", self.grid)?;
        }
        write!(
            f,
            " |E|={} {}",
            self.universe_size,
            if self.total_only { "total" } else { "all" }
        )
    }
}

/// Deterministic enumeration of a domain.
///
/// Labels are ordered as in the universe with the first label most
/// significant; per label, `(δ, γ)` pairs are ordered lexicographically.
pub fn enumerate<T: Scalar>(
    domain: &EnumerationDomain,
    budget: u128,
) -> Result<ProcessEnumerator<T>, HarnessError> {
    let required = domain.size();
    if required > budget {
        return Err(HarnessError::BudgetExceeded {
            what: format!("enumeration of {}", domain.spec()),
            required,
            budget,
        });
    }
    Ok(ProcessEnumerator::new(domain))
}

/// Iterator produced by [`enumerate`].
pub struct ProcessEnumerator<T> {
    universe: Arc<ExecutionUniverse>,
    states: Vec<(Membership<T>, Membership<T>)>,
    digits: Vec<usize>,
    done: bool,
}

impl<T: Scalar> ProcessEnumerator<T> {
    fn new(domain: &EnumerationDomain) -> Self {
        let grid: Vec<Membership<T>> = (0..=domain.grid)
            .map(|i| {
                Membership::new(T::from_ratio(i, domain.grid)).expect("grid values lie in [0, 1]")
            })
            .collect();
        let mut states = Vec::with_capacity(grid.len() * grid.len());
        for d in &grid {
            for g in &grid {
                if domain.total_only && d.is_zero() && g.is_zero() {
                    continue;
                }
                states.push((d.clone(), g.clone()));
            }
        }
        Self {
            universe: Arc::clone(&domain.universe),
            states,
            digits: vec![0; domain.universe.len()],
            done: false,
        }
    }
}

impl<T: Scalar> Iterator for ProcessEnumerator<T> {
    type Item = FuzzyProcess<T>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let (delta, gamma) = self.digits.iter().map(|&s| self.states[s].clone()).unzip();
        let item = FuzzyProcess::from_parts_unchecked(Arc::clone(&self.universe), delta, gamma);

        // Odometer step, last label fastest.
        self.done = true;
        for digit in self.digits.iter_mut().rev() {
            *digit += 1;
            if *digit < self.states.len() {
                self.done = false;
                break;
            }
            *digit = 0;
        }
        Some(item)
    }
}
