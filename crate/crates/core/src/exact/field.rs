use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// A commutative field with exact equality.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn try_inv(&self) -> Result<Self>;

    fn from_rational(q: Rational) -> Self;

    fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * &other.try_inv()?)
    }
}

impl Field for Rational {
    fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn from_rational(q: Rational) -> Self {
        q
    }
}
