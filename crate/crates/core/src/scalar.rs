//! Numeric abstractions.
//!
//! Exact quantities (configuration distances, Cantor coordinates) are
//! generic over [`Scalar`], so the same code evaluates them as big rationals
//! or as floats. Entropy estimates are generic over [`Estimate`].

use std::fmt::Debug;

/// Any number system closed under `+ - * /` with a total-enough order:
/// `BigRational`, `Ratio<i64>`, `f64`, `f32`.
pub trait Scalar: num_traits::Num + Clone + PartialOrd + Debug {}

impl<T: num_traits::Num + Clone + PartialOrd + Debug> Scalar for T {}

/// Floating-point types used for logarithmic entropy estimates.
pub trait Estimate: num_traits::Float + num_traits::FromPrimitive + Debug + Send + Sync {}

impl<T: num_traits::Float + num_traits::FromPrimitive + Debug + Send + Sync> Estimate for T {}

/// The natural number `n` as a scalar, built from `one()` by doubling.
pub fn lift<T: Scalar>(mut n: u64) -> T {
    let mut acc = T::zero();
    let mut unit = T::one();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc + unit.clone();
        }
        unit = unit.clone() + unit;
        n >>= 1;
    }
    acc
}

/// `base^exp` by repeated squaring.
pub fn pow<T: Scalar>(base: T, mut exp: u32) -> T {
    let mut acc = T::one();
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b.clone();
        }
        b = b.clone() * b;
        exp >>= 1;
    }
    acc
}
