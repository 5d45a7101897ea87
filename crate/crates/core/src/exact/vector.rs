use std::fmt;
use std::ops::{Deref, Index};

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::{format_rational, OrderedField, Rational};
use crate::error::{Error, Result};

/// Exact coordinate vector. Componentwise `≤` and `<` are [`RationalVec::le`]
/// and [`RationalVec::lt`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalVec(Vec<Rational>);

impl RationalVec {
    pub fn new(entries: Vec<Rational>) -> Self {
        RationalVec(entries)
    }

    pub fn zeros(n: usize) -> Self {
        RationalVec(vec![Rational::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RationalVec(v.iter().map(|&x| super::int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn dot(&self, other: &RationalVec) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// `x ≤ y` in every coordinate.
    pub fn le(&self, other: &RationalVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `x < y` in every coordinate.
    pub fn lt(&self, other: &RationalVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a < b)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|x| x.is_positive())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, m: &Rational) -> RationalVec {
        RationalVec(self.0.iter().map(|x| x * m).collect())
    }

    pub fn add(&self, other: &RationalVec) -> RationalVec {
        RationalVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVec) -> RationalVec {
        RationalVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add_scalar(&self, s: &Rational) -> RationalVec {
        RationalVec(self.0.iter().map(|a| a + s).collect())
    }

    /// Keeps the listed coordinates, in the given order.
    pub fn select(&self, coords: &[usize]) -> RationalVec {
        RationalVec(coords.iter().map(|&i| self.0[i].clone()).collect())
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| !self.0[i].is_zero()).collect()
    }

    pub fn lift<F: OrderedField>(&self) -> Vec<F> {
        self.0.iter().map(F::from_rational).collect()
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.dim(),
            });
        }
        Ok(())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational_to_f64).collect()
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl Deref for RationalVec {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl Index<usize> for RationalVec {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl From<Vec<Rational>> for RationalVec {
    fn from(v: Vec<Rational>) -> Self {
        RationalVec(v)
    }
}

impl fmt::Display for RationalVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(x))?;
        }
        write!(f, ")")
    }
}

impl Serialize for RationalVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(format_rational).collect();
        v.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn componentwise_orders() {
        let a = RationalVec::from_ints(&[1, 2]);
        let b = RationalVec::from_ints(&[1, 3]);
        assert!(a.le(&b));
        assert!(!a.lt(&b));
        assert!(a.lt(&RationalVec::from_ints(&[2, 3])));
    }

    #[test]
    fn display_uses_fractions() {
        let v = RationalVec::new(vec![rat(3, 2), rat(4, 1)]);
        assert_eq!(v.to_string(), "(3/2, 4)");
    }
}
