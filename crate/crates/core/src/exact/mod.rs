//! Exact scalars, vectors and the rational simplex engine.
//!
//! Everything in this module is exact: scalars are arbitrary precision
//! rationals, optionally extended by a positive infinitesimal `ε`
//! ([`EpsRational`]). No floating point appears on any path here.

mod eps;
mod field;
mod simplex;
mod dominate;
mod vector;

pub use dominate::{
    lp_strict_dominate, lp_strict_dominate_eps, solve_domination, DominationLp, DominationResult,
};
pub use eps::{EpsRational, DEFAULT_EPS_DEGREE};
pub use field::OrderedField;
pub use simplex::{solve_lp, LinearProgram, LpOutcome};
pub use vector::RationalVec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `p`. Decimal points are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = t.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// `p/q`, with `/q` omitted when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Positive integer test used by the (⋆) offset condition.
pub fn is_positive_integer(r: &Rational) -> bool {
    r.is_integer() && r.is_positive()
}

/// `floor(sqrt(x))` for `x ≥ 0`, exact.
pub fn floor_sqrt(x: &Rational) -> BigInt {
    debug_assert!(!x.is_negative());
    x.floor().to_integer().sqrt()
}

pub fn ceil_to_int(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// The positive multiple of `v` with coprime integer entries. `v` must be
/// nonzero.
pub fn primitive_integer(v: &RationalVec) -> RationalVec {
    use num_integer::Integer;
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v.clone();
    }
    RationalVec::new(ints.into_iter().map(|x| Rational::from_integer(x / &gcd)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -4 ").unwrap(), int(-4));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&rat(6, 3)), "2");
        assert_eq!(format_rational(&rat(-1, 3)), "-1/3");
    }

    #[test]
    fn primitive_vectors() {
        let v = RationalVec::new(vec![rat(1, 2), rat(1, 3)]);
        assert_eq!(primitive_integer(&v), RationalVec::from_ints(&[3, 2]));
        let v = RationalVec::new(vec![rat(4, 1), int(0), int(6)]);
        assert_eq!(primitive_integer(&v), RationalVec::from_ints(&[2, 0, 3]));
    }

    #[test]
    fn integer_square_roots() {
        assert_eq!(floor_sqrt(&rat(17, 2)), BigInt::from(2));
        assert_eq!(floor_sqrt(&int(9)), BigInt::from(3));
        assert_eq!(floor_sqrt(&rat(1, 2)), BigInt::from(0));
    }
}
