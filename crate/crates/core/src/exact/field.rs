use std::fmt;

use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// An ordered field the simplex engine can pivot over.
///
/// Multiplication and division are fallible because the infinitesimal
/// extension truncates at a fixed degree and refuses to approximate.
pub trait OrderedField: Clone + Ord + fmt::Debug + fmt::Display + Send + Sync {
    fn zero_val() -> Self;
    fn one_val() -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// The value as a plain rational, if it has no infinitesimal part.
    fn to_rational(&self) -> Option<Rational>;

    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, factor: &Rational) -> Self;
    fn times(&self, other: &Self) -> Result<Self>;
    fn over(&self, other: &Self) -> Result<Self>;

    fn is_zero_value(&self) -> bool {
        *self == Self::zero_val()
    }
    fn is_positive_value(&self) -> bool {
        *self > Self::zero_val()
    }
    fn is_negative_value(&self) -> bool {
        *self < Self::zero_val()
    }
}

impl OrderedField for Rational {
    fn zero_val() -> Self {
        Zero::zero()
    }
    fn one_val() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, factor: &Rational) -> Self {
        self * factor
    }
    fn times(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn over(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / other)
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}
