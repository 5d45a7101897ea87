use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use super::{format_rational, OrderedField, Rational};
use crate::error::{Error, Result};

pub const DEFAULT_EPS_DEGREE: usize = 2;

/// `c₀ + c₁ε + c₂ε² + …` for a positive infinitesimal `ε`.
///
/// Ordered lexicographically on the coefficients, so `0 < ε < r` for every
/// positive rational `r`. Products that would need a coefficient above the
/// degree cap fail with [`Error::DegreeOverflow`] instead of truncating.
#[derive(Clone, Debug)]
pub struct EpsRational {
    // trailing zeros trimmed
    coeffs: Vec<Rational>,
    max_degree: usize,
}

impl EpsRational {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        Self::with_degree(coeffs, DEFAULT_EPS_DEGREE)
    }

    pub fn with_degree(coeffs: Vec<Rational>, max_degree: usize) -> Result<Self> {
        let mut v = EpsRational { coeffs, max_degree };
        v.trim();
        if v.coeffs.len() > max_degree + 1 {
            return Err(Error::DegreeOverflow { max_degree });
        }
        Ok(v)
    }

    pub fn constant(r: Rational) -> Self {
        let mut v = EpsRational {
            coeffs: vec![r],
            max_degree: DEFAULT_EPS_DEGREE,
        };
        v.trim();
        v
    }

    /// `c + d·ε`.
    pub fn linear(c: Rational, d: Rational) -> Self {
        let mut v = EpsRational {
            coeffs: vec![c, d],
            max_degree: DEFAULT_EPS_DEGREE,
        };
        v.trim();
        v
    }

    pub fn epsilon() -> Self {
        Self::linear(Rational::zero(), num_traits::One::one())
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Standard part (the coefficient of `ε⁰`).
    pub fn standard_part(&self) -> Rational {
        self.coeff(0)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn degree_cap(&self, other: &Self) -> usize {
        self.max_degree.max(other.max_degree)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| f(&self.coeff(k), &other.coeff(k))).collect();
        let mut v = EpsRational {
            coeffs,
            max_degree: self.degree_cap(other),
        };
        v.trim();
        v
    }
}

impl PartialEq for EpsRational {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for EpsRational {}

impl Ord for EpsRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.coeffs.len().max(other.coeffs.len());
        for k in 0..len {
            match self.coeff(k).cmp(&other.coeff(k)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for EpsRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EpsRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = format_rational(&c.abs());
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                1 if mag == "1" => write!(f, "eps")?,
                1 => write!(f, "{mag}*eps")?,
                _ if mag == "1" => write!(f, "eps^{k}")?,
                _ => write!(f, "{mag}*eps^{k}")?,
            }
        }
        Ok(())
    }
}

impl OrderedField for EpsRational {
    fn zero_val() -> Self {
        EpsRational {
            coeffs: Vec::new(),
            max_degree: DEFAULT_EPS_DEGREE,
        }
    }

    fn one_val() -> Self {
        Self::constant(num_traits::One::one())
    }

    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }

    fn to_rational(&self) -> Option<Rational> {
        if self.coeffs.len() <= 1 {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    fn plus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    fn minus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn negated(&self) -> Self {
        EpsRational {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            max_degree: self.max_degree,
        }
    }

    fn scaled(&self, factor: &Rational) -> Self {
        let mut v = EpsRational {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            max_degree: self.max_degree,
        };
        v.trim();
        v
    }

    fn times(&self, other: &Self) -> Result<Self> {
        let cap = self.degree_cap(other);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(EpsRational {
                coeffs: Vec::new(),
                max_degree: cap,
            });
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        EpsRational::with_degree(out, cap)
    }

    fn over(&self, other: &Self) -> Result<Self> {
        let cap = self.degree_cap(other);
        if other.coeffs.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let b0 = other.coeff(0);
        if b0.is_zero() {
            // would need negative powers of ε
            return Err(Error::DegreeOverflow { max_degree: cap });
        }
        let mut q: Vec<Rational> = Vec::with_capacity(cap + 1);
        for k in 0..=cap {
            let mut acc = self.coeff(k);
            for i in 1..=k {
                acc -= other.coeff(i) * &q[k - i];
            }
            q.push(acc / &b0);
        }
        let quotient = EpsRational::with_degree(q, cap)?;
        // Exactness: the truncated series must reproduce the dividend.
        let back = quotient.times(other).map_err(|_| Error::DegreeOverflow { max_degree: cap })?;
        if back != *self {
            return Err(Error::DegreeOverflow { max_degree: cap });
        }
        Ok(quotient)
    }
}
