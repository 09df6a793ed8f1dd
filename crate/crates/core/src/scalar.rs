//! The scalar field abstraction.
//!
//! Everything in this crate is written against [`Scalar`], which is any exact
//! field type from `num-traits`. Rank and kernel decisions are made by exact
//! zero tests, so the intended instantiations are rationals:
//! [`num_rational::BigRational`] for production use and `Ratio<i64>` /
//! `Ratio<i128>` when the inputs are known to stay small.

use std::fmt;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// An exact field element.
pub trait Scalar:
    Num + Neg<Output = Self> + FromPrimitive + Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// `self * other` without consuming either side.
    #[inline]
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    /// `self + a * b`, skipping the product when either factor vanishes.
    #[inline]
    fn add_mul(self, a: &Self, b: &Self) -> Self {
        if a.is_zero() || b.is_zero() {
            self
        } else {
            self + a.mul_ref(b)
        }
    }

    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("every field of characteristic zero contains the integers")
    }
}

impl<T> Scalar for T where
    T: Num + Neg<Output = T> + FromPrimitive + Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}
