//! Coefficient field abstraction.
//!
//! Everything in the crate is generic over [`Scalar`]. The exact rational
//! types are the ones the exact checks are meant for; `f64` is supported
//! for quick numerical experiments but equality is then only as good as the
//! floating point arithmetic behind it.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

/// Exact rational weight of a density, `w` in `f·t^w`.
pub type Weight = Ratio<i64>;

/// A commutative field of characteristic zero.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(n: i64) -> Self;

    fn from_weight(w: &Weight) -> Self {
        Self::from_i64(*w.numer()) / Self::from_i64(*w.denom())
    }

    /// Converts back to an exact weight when the value is rational with
    /// machine-sized parts.
    fn to_weight(&self) -> Option<Weight>;

    fn pow_u32(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_weight(&self) -> Option<Weight> {
        let n: i64 = self.numer().try_into().ok()?;
        let d: i64 = self.denom().try_into().ok()?;
        Some(Weight::new(n, d))
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }

    fn to_weight(&self) -> Option<Weight> {
        Some(*self)
    }
}

impl Scalar for Ratio<i128> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n as i128)
    }

    fn to_weight(&self) -> Option<Weight> {
        let n: i64 = (*self.numer()).try_into().ok()?;
        let d: i64 = (*self.denom()).try_into().ok()?;
        Some(Weight::new(n, d))
    }
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_weight(w: &Weight) -> Self {
        *w.numer() as f64 / *w.denom() as f64
    }

    fn to_weight(&self) -> Option<Weight> {
        if self.fract() == 0.0 && self.abs() < 1e15 {
            Some(Weight::from_integer(*self as i64))
        } else {
            None
        }
    }
}

pub(crate) fn factorial<T: Scalar>(k: u32) -> T {
    (1..=k as i64).fold(T::one(), |acc, i| acc * T::from_i64(i))
}
