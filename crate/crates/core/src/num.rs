//! Scalar abstraction for probability-valued quantities.

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};
use std::fmt::Debug;

/// A number type that can hold probabilities and the products and partial
/// sums of probabilities used to rank Bloom level bits.
///
/// Implemented for `f32`, `f64` and exact `Ratio<i64>`.
pub trait Probability: Copy + PartialOrd + Num + Debug {
    /// `count / total`. `total` must be positive.
    fn from_counts(count: u64, total: u64) -> Self;

    fn to_f64(self) -> f64;
}

impl Probability for f64 {
    #[inline]
    fn from_counts(count: u64, total: u64) -> Self {
        count as f64 / total as f64
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

impl Probability for f32 {
    #[inline]
    fn from_counts(count: u64, total: u64) -> Self {
        (count as f64 / total as f64) as f32
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Probability for Ratio<i64> {
    fn from_counts(count: u64, total: u64) -> Self {
        let count = i64::try_from(count).expect("count overflows i64");
        let total = i64::try_from(total).expect("total overflows i64");
        Ratio::new(count, total)
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_counts_agree_across_scalars() {
        let exact = <Ratio<i64> as Probability>::from_counts(3, 12);
        assert_eq!(exact, Ratio::new(1, 4));
        assert_eq!(Probability::to_f64(exact), 0.25);
        assert_eq!(<f64 as Probability>::from_counts(3, 12), 0.25);
        assert_eq!(<f32 as Probability>::from_counts(3, 12), 0.25f32);
    }
}
