//! The field abstraction shared by the linear-algebra and representation code.
//!
//! Matrices, groupoid representations and class functions are generic over
//! [`Field`]. Two families of scalars implement it: the exact rationals
//! `num_rational::Ratio<T>` for any signed integer type `T` (so both
//! `BigRational` and `Rational64` work), and [`CycNumber`](crate::CycNumber).
//!
//! Arithmetic takes references so that arbitrary-precision values are not
//! cloned on every operation. Constructors are "like" another value because a
//! cyclotomic number carries its level, which a bare `zero()` cannot know.

use std::fmt::Debug;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed};

pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    /// `self / n` for a nonzero integer `n`.
    fn div_int(&self, n: i64) -> Option<Self> {
        self.from_int_like(n).inverse().map(|inv| self.times(&inv))
    }
}

impl<T> Field for Ratio<T>
where
    T: Clone + Integer + Signed + FromPrimitive + Debug + Send + Sync,
{
    fn zero_like(&self) -> Self {
        Ratio::from_integer(T::zero())
    }

    fn one_like(&self) -> Self {
        Ratio::from_integer(T::one())
    }

    fn from_int_like(&self, n: i64) -> Self {
        Ratio::from_integer(T::from_i64(n).expect("integer out of range for scalar type"))
    }

    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn negated(&self) -> Self {
        -self.clone()
    }

    fn inverse(&self) -> Option<Self> {
        if Field::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}
