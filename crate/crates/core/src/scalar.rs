//! Scalar types usable as membership degrees.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{One, Zero};

/// A totally ordered (on the values we use) field element that can carry a
/// membership degree in `[0, 1]`.
///
/// Exact rationals are the intended instantiation. Floats are supported for
/// experimentation, but the algebra's identities are only guaranteed for
/// exact types.
pub trait Scalar:
    Clone + PartialOrd + Zero + One + Debug + Display + Send + Sync + 'static
{
    /// Builds `num / den`. `den` is non-zero.
    fn from_ratio(num: u32, den: u32) -> Self;
}

macro_rules! ratio_scalar {
    ($($int:ty),*) => {$(
        impl Scalar for Ratio<$int> {
            fn from_ratio(num: u32, den: u32) -> Self {
                Ratio::new(<$int>::from(num), <$int>::from(den))
            }
        }
    )*};
}

ratio_scalar!(i64, i128);

impl Scalar for f64 {
    fn from_ratio(num: u32, den: u32) -> Self {
        f64::from(num) / f64::from(den)
    }
}

impl Scalar for f32 {
    fn from_ratio(num: u32, den: u32) -> Self {
        num as f32 / den as f32
    }
}

pub(crate) fn min_ref<'a, T: PartialOrd>(a: &'a T, b: &'a T) -> &'a T {
    if b < a {
        b
    } else {
        a
    }
}

pub(crate) fn max_ref<'a, T: PartialOrd>(a: &'a T, b: &'a T) -> &'a T {
    if b > a {
        b
    } else {
        a
    }
}
