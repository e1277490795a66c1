use std::fmt;

use crate::error::{CoreError, Result};
use crate::scalar::{max_ref, min_ref, Scalar};

/// A membership degree, guaranteed to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Eq, Ord, Hash)]
pub struct Membership<T>(T);

impl<T: Scalar> Membership<T> {
    pub fn new(value: T) -> Result<Self> {
        // Written so that NaN fails both comparisons.
        if value >= T::zero() && value <= T::one() {
            Ok(Self(value))
        } else {
            Err(CoreError::OutOfRange {
                label: None,
                value: value.to_string(),
            })
        }
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn one() -> Self {
        Self(T::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0 == T::one()
    }

    pub fn value(&self) -> &T {
        &self.0
    }

    pub fn into_inner(self) -> T {
        self.0
    }

    pub fn min(&self, other: &Self) -> Self {
        min_ref(self, other).clone()
    }

    pub fn max(&self, other: &Self) -> Self {
        max_ref(self, other).clone()
    }
}

impl<T: fmt::Display> fmt::Display for Membership<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn range_is_closed_unit_interval() {
        assert!(Membership::new(Rational::new(0, 1)).is_ok());
        assert!(Membership::new(Rational::new(1, 1)).is_ok());
        assert!(Membership::new(Rational::new(3, 2)).is_err());
        assert!(Membership::new(Rational::new(-1, 2)).is_err());
        assert!(Membership::new(f64::NAN).is_err());
    }

    #[test]
    fn equality_is_exact_after_reduction() {
        let a = Membership::new(Rational::new(2, 4)).unwrap();
        let b = Membership::new(Rational::new(1, 2)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1/2");
    }
}
