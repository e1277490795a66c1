use std::fmt;
use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::membership::Membership;
use crate::scalar::Scalar;
use crate::universe::ExecutionUniverse;

/// A fuzzy process: an accessibility map `delta` and an acceptability map
/// `gamma`, both total over the universe (zero outside their supports).
///
/// Processes are immutable once built. Equality is exact pointwise equality
/// of both maps over the same universe.
#[derive(Clone)]
pub struct FuzzyProcess<T> {
    universe: Arc<ExecutionUniverse>,
    delta: Vec<Membership<T>>,
    gamma: Vec<Membership<T>>,
}

/// Support-level state of one execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrispState {
    /// Neither accessible nor acceptable.
    Rejected,
    AccessibleOnly,
    AcceptableOnly,
    Both,
}

impl CrispState {
    pub fn new(accessible: bool, acceptable: bool) -> Self {
        match (accessible, acceptable) {
            (false, false) => CrispState::Rejected,
            (true, false) => CrispState::AccessibleOnly,
            (false, true) => CrispState::AcceptableOnly,
            (true, true) => CrispState::Both,
        }
    }

    pub fn accessible(self) -> bool {
        matches!(self, CrispState::AccessibleOnly | CrispState::Both)
    }

    pub fn acceptable(self) -> bool {
        matches!(self, CrispState::AcceptableOnly | CrispState::Both)
    }
}

/// The support view of a process, as label lists in universe order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Supports {
    /// `X`: executions with positive accessibility.
    pub accessible: Vec<String>,
    /// `Y`: executions with positive acceptability.
    pub acceptable: Vec<String>,
    /// `B`: executions in neither.
    pub rejections: Vec<String>,
}

impl<T: Scalar> FuzzyProcess<T> {
    /// Builds a process from dense value vectors in universe order.
    pub fn new(
        universe: Arc<ExecutionUniverse>,
        delta: Vec<Membership<T>>,
        gamma: Vec<Membership<T>>,
    ) -> Result<Self> {
        for found in [delta.len(), gamma.len()] {
            if found != universe.len() {
                return Err(CoreError::LengthMismatch {
                    expected: universe.len(),
                    found,
                });
            }
        }
        Ok(Self {
            universe,
            delta,
            gamma,
        })
    }

    /// Builds a process from sparse label maps. Labels not mentioned get 0.
    pub fn from_maps<D, G, S>(universe: &Arc<ExecutionUniverse>, delta: D, gamma: G) -> Result<Self>
    where
        D: IntoIterator<Item = (S, T)>,
        G: IntoIterator<Item = (S, T)>,
        S: AsRef<str>,
    {
        let delta = dense(universe, delta)?;
        let gamma = dense(universe, gamma)?;
        Ok(Self {
            universe: Arc::clone(universe),
            delta,
            gamma,
        })
    }

    /// The process whose maps are constant `delta` and `gamma`.
    pub fn constant(
        universe: &Arc<ExecutionUniverse>,
        delta: Membership<T>,
        gamma: Membership<T>,
    ) -> Self {
        let n = universe.len();
        Self {
            universe: Arc::clone(universe),
            delta: vec![delta; n],
            gamma: vec![gamma; n],
        }
    }

    /// `Ω`: every execution fully accessible and fully acceptable.
    pub fn omega(universe: &Arc<ExecutionUniverse>) -> Self {
        Self::constant(universe, Membership::one(), Membership::one())
    }

    /// The process rejecting every execution (`B = E`).
    pub fn rejecting(universe: &Arc<ExecutionUniverse>) -> Self {
        Self::constant(universe, Membership::zero(), Membership::zero())
    }

    pub(crate) fn from_parts_unchecked(
        universe: Arc<ExecutionUniverse>,
        delta: Vec<Membership<T>>,
        gamma: Vec<Membership<T>>,
    ) -> Self {
        debug_assert_eq!(delta.len(), universe.len());
        debug_assert_eq!(gamma.len(), universe.len());
        Self {
            universe,
            delta,
            gamma,
        }
    }

    pub fn universe(&self) -> &Arc<ExecutionUniverse> {
        &self.universe
    }

    pub fn delta(&self) -> &[Membership<T>] {
        &self.delta
    }

    pub fn gamma(&self) -> &[Membership<T>] {
        &self.gamma
    }

    pub fn delta_of(&self, label: &str) -> Option<&Membership<T>> {
        self.universe.index_of(label).map(|i| &self.delta[i])
    }

    pub fn gamma_of(&self, label: &str) -> Option<&Membership<T>> {
        self.universe.index_of(label).map(|i| &self.gamma[i])
    }

    pub fn accessible_at(&self, i: usize) -> bool {
        self.delta[i].is_positive()
    }

    pub fn acceptable_at(&self, i: usize) -> bool {
        self.gamma[i].is_positive()
    }

    pub fn state_at(&self, i: usize) -> CrispState {
        CrispState::new(self.accessible_at(i), self.acceptable_at(i))
    }

    /// Per-label support state, in universe order.
    pub fn shadow(&self) -> Vec<CrispState> {
        (0..self.universe.len()).map(|i| self.state_at(i)).collect()
    }

    pub fn supports(&self) -> Supports {
        let mut supports = Supports {
            accessible: Vec::new(),
            acceptable: Vec::new(),
            rejections: Vec::new(),
        };
        for (i, label) in self.universe.labels().iter().enumerate() {
            let state = self.state_at(i);
            if state.accessible() {
                supports.accessible.push(label.clone());
            }
            if state.acceptable() {
                supports.acceptable.push(label.clone());
            }
            if state == CrispState::Rejected {
                supports.rejections.push(label.clone());
            }
        }
        supports
    }

    /// Labels of `B`, in universe order.
    pub fn rejections(&self) -> Vec<&str> {
        (0..self.universe.len())
            .filter(|&i| self.state_at(i) == CrispState::Rejected)
            .map(|i| self.universe.label(i))
            .collect()
    }

    /// Whether every membership value is 0 or 1.
    pub fn is_crisp(&self) -> bool {
        self.delta
            .iter()
            .chain(&self.gamma)
            .all(|m| m.is_zero() || m.is_one())
    }
}

fn dense<T, I, S>(universe: &ExecutionUniverse, entries: I) -> Result<Vec<Membership<T>>>
where
    T: Scalar,
    I: IntoIterator<Item = (S, T)>,
    S: AsRef<str>,
{
    let mut values = vec![Membership::zero(); universe.len()];
    for (label, value) in entries {
        let label = label.as_ref();
        let i = universe
            .index_of(label)
            .ok_or_else(|| CoreError::UnknownLabel(label.to_owned()))?;
        values[i] = Membership::new(value).map_err(|e| match e {
            CoreError::OutOfRange { value, .. } => CoreError::OutOfRange {
                label: Some(label.to_owned()),
                value,
            },
            other => other,
        })?;
    }
    Ok(values)
}

impl<T: PartialEq> PartialEq for FuzzyProcess<T> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.universe, &other.universe) || self.universe == other.universe)
            && self.delta == other.delta
            && self.gamma == other.gamma
    }
}

impl<T: fmt::Debug> fmt::Debug for FuzzyProcess<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FuzzyProcess")
            .field("universe", &self.universe.labels())
            .field("delta", &self.delta)
            .field("gamma", &self.gamma)
            .finish()
    }
}

/// Compact form `[a:δ,γ b:δ,γ ...]`.
impl<T: fmt::Display> fmt::Display for FuzzyProcess<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, label) in self.universe.labels().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{label}:{},{}", self.delta[i], self.gamma[i])?;
        }
        f.write_str("]")
    }
}
