//! Operations and predicates on fuzzy processes.
//!
//! All binary operations require both operands to share one universe. Values
//! combine pointwise with Gödel (min/max) semantics; the product and sum
//! additionally assign the "vacuous" constant (default 1) on executions that
//! are acceptable only because one side cannot reach them.

use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::membership::Membership;
use crate::process::FuzzyProcess;
use crate::scalar::Scalar;
use crate::universe::same_universe;

impl<T: Scalar> FuzzyProcess<T> {
    fn check_universe(&self, other: &Self) -> Result<()> {
        if same_universe(self.universe(), other.universe()) {
            Ok(())
        } else {
            Err(CoreError::UniverseMismatch)
        }
    }

    fn zip_with<F>(&self, other: &Self, mut f: F) -> Result<Self>
    where
        F: FnMut(usize) -> (Membership<T>, Membership<T>),
    {
        self.check_universe(other)?;
        let n = self.universe().len();
        let mut delta = Vec::with_capacity(n);
        let mut gamma = Vec::with_capacity(n);
        for i in 0..n {
            let (d, g) = f(i);
            delta.push(d);
            gamma.push(g);
        }
        Ok(Self::from_parts_unchecked(
            Arc::clone(self.universe()),
            delta,
            gamma,
        ))
    }

    /// `p ⊗ q` with the default vacuous constant 1.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.product_with(other, &Membership::one())
    }

    /// `p ⊗ q`.
    ///
    /// `δ = min(δp, δq)`. `γ = min(γp, γq)` where both accept, `vacuous` on
    /// `(X̃p ∩ Ỹq) ∪ (Ỹp ∩ X̃q)`, and 0 elsewhere.
    pub fn product_with(&self, other: &Self, vacuous: &Membership<T>) -> Result<Self> {
        let (p, q) = (self, other);
        self.zip_with(other, |i| {
            let delta = p.delta()[i].min(&q.delta()[i]);
            let gamma = if p.acceptable_at(i) && q.acceptable_at(i) {
                p.gamma()[i].min(&q.gamma()[i])
            } else if (!p.accessible_at(i) && !q.acceptable_at(i))
                || (!p.acceptable_at(i) && !q.accessible_at(i))
            {
                vacuous.clone()
            } else {
                Membership::zero()
            };
            (delta, gamma)
        })
    }

    /// `p ⊕ q` with the default vacuous constant 1.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.sum_with(other, &Membership::one())
    }

    /// `p ⊕ q`, the dual of the product under reflection, in closed form.
    ///
    /// `γ = min(γp, γq)`. `δ = min(δp, δq)` where both are accessible,
    /// `vacuous` on `(Ỹp ∩ X̃q) ∪ (X̃p ∩ Ỹq)`, and 0 elsewhere.
    pub fn sum_with(&self, other: &Self, vacuous: &Membership<T>) -> Result<Self> {
        let (p, q) = (self, other);
        self.zip_with(other, |i| {
            let gamma = p.gamma()[i].min(&q.gamma()[i]);
            let delta = if p.accessible_at(i) && q.accessible_at(i) {
                p.delta()[i].min(&q.delta()[i])
            } else if (!p.acceptable_at(i) && !q.accessible_at(i))
                || (!p.accessible_at(i) && !q.acceptable_at(i))
            {
                vacuous.clone()
            } else {
                Membership::zero()
            };
            (delta, gamma)
        })
    }

    /// `-p`: swaps the device and environment roles.
    pub fn reflect(&self) -> Self {
        Self::from_parts_unchecked(
            Arc::clone(self.universe()),
            self.gamma().to_vec(),
            self.delta().to_vec(),
        )
    }

    /// `p ⊔ q`: least upper bound under [`fuzzy_refines`](Self::fuzzy_refines).
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |i| {
            (
                self.delta()[i].min(&other.delta()[i]),
                self.gamma()[i].max(&other.gamma()[i]),
            )
        })
    }

    /// `p ⊓ q`: greatest lower bound under [`fuzzy_refines`](Self::fuzzy_refines).
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |i| {
            (
                self.delta()[i].max(&other.delta()[i]),
                self.gamma()[i].min(&other.gamma()[i]),
            )
        })
    }

    /// Membership-level refinement `p ⊑ q`: `δp ≥ δq` and `γp ≤ γq` everywhere.
    pub fn fuzzy_refines(&self, other: &Self) -> Result<bool> {
        self.check_universe(other)?;
        Ok(self.fuzzy_refinement_failure(other).is_none())
    }

    /// Support-level refinement: `Xp ⊇ Xq` and `Yp ⊆ Yq`.
    pub fn support_refines(&self, other: &Self) -> Result<bool> {
        self.check_universe(other)?;
        Ok(self.support_refinement_failure(other).is_none())
    }

    /// First execution index where membership-level refinement fails.
    pub fn fuzzy_refinement_failure(&self, other: &Self) -> Option<usize> {
        (0..self.universe().len())
            .find(|&i| self.delta()[i] < other.delta()[i] || self.gamma()[i] > other.gamma()[i])
    }

    /// First execution index where support-level refinement fails.
    pub fn support_refinement_failure(&self, other: &Self) -> Option<usize> {
        (0..self.universe().len()).find(|&i| {
            (other.accessible_at(i) && !self.accessible_at(i))
                || (self.acceptable_at(i) && !other.acceptable_at(i))
        })
    }

    /// First execution index where the two processes differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        (0..self.universe().len())
            .find(|&i| self.delta()[i] != other.delta()[i] || self.gamma()[i] != other.gamma()[i])
    }

    /// `B = ∅`, i.e. every execution is accessible or acceptable.
    pub fn is_total(&self) -> bool {
        (0..self.universe().len()).all(|i| self.accessible_at(i) || self.acceptable_at(i))
    }

    /// `γ ≡ 1`.
    pub fn is_robust(&self) -> bool {
        self.gamma().iter().all(Membership::is_one)
    }

    /// `δ ≡ 1`.
    pub fn is_chaotic(&self) -> bool {
        self.delta().iter().all(Membership::is_one)
    }

    /// `Y = E`.
    pub fn is_robust_support(&self) -> bool {
        self.gamma().iter().all(Membership::is_positive)
    }

    /// `X = E`.
    pub fn is_chaotic_support(&self) -> bool {
        self.delta().iter().all(Membership::is_positive)
    }

    /// Splits `p` into `(p ⊔ Ω, p ⊓ Ω) = ((δp, 1), (1, γp))`.
    pub fn factor(&self) -> Factorization<T> {
        let omega = Self::omega(self.universe());
        let robust = self.join(&omega).expect("Ω shares the universe");
        let chaotic = self.meet(&omega).expect("Ω shares the universe");
        let rebuilt = robust
            .product(&chaotic)
            .expect("factors share the universe");
        let mismatched = (0..self.universe().len())
            .filter(|&i| {
                self.delta()[i] != rebuilt.delta()[i] || self.gamma()[i] != rebuilt.gamma()[i]
            })
            .map(|i| self.universe().label(i).to_owned())
            .collect();
        Factorization {
            robust,
            chaotic,
            total: self.is_total(),
            mismatched,
        }
    }
}

/// Result of [`FuzzyProcess::factor`].
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization<T> {
    pub robust: FuzzyProcess<T>,
    pub chaotic: FuzzyProcess<T>,
    /// Whether the factored process was total. Exact reconstruction is only
    /// guaranteed when it was.
    pub total: bool,
    /// Labels where `robust ⊗ chaotic` differs from the original.
    pub mismatched: Vec<String>,
}

impl<T> Factorization<T> {
    pub fn reconstruction_exact(&self) -> bool {
        self.mismatched.is_empty()
    }
}
