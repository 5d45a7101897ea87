//! Monomial multiplier ideals: `z^α ∈ J(cφ)₀ ⇔ α + 1 ∈ int(c·P)`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::body::{serialize_rational, GeneratorFamily};
use crate::error::{Error, Result};
use crate::exact::{ceil_to_int, Rational};
use crate::jumping::shifted;
use crate::membership::{is_interior, MembershipVerdict};

/// Largest box the automatic search will grow to.
pub const MAX_AUTO_BOX: u64 = 512;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialIdeal {
    pub dim: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub c: Rational,
    /// Exponent vectors in lexicographic order, pairwise incomparable.
    pub minimal_generators: Vec<Vec<u64>>,
    pub box_bound: u64,
    /// No generator touches the far faces of the box and membership on each
    /// far face agrees with the layer below it.
    pub complete: bool,
}

impl MonomialIdeal {
    /// Membership read off the generators.
    pub fn contains(&self, alpha: &[u64]) -> bool {
        self.minimal_generators
            .iter()
            .any(|g| g.iter().zip(alpha).all(|(a, b)| a <= b))
    }
}

fn check_c(c: &Rational) -> Result<()> {
    if !c.is_positive() {
        return Err(Error::InvalidArgument("coefficient c must be positive".into()));
    }
    Ok(())
}

/// The certified membership test behind [`contains_monomial`].
pub fn monomial_verdict(
    body: &GeneratorFamily,
    c: &Rational,
    alpha: &[u64],
) -> Result<MembershipVerdict> {
    check_c(c)?;
    if alpha.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: alpha.len(),
        });
    }
    is_interior(&body.scale(c)?, &shifted(alpha))
}

pub fn contains_monomial(body: &GeneratorFamily, c: &Rational, alpha: &[u64]) -> Result<bool> {
    Ok(monomial_verdict(body, c, alpha)?.answer)
}

/// Smallest last exponent in `[0, B]` that puts `(prefix, ·)` in the ideal.
fn frontier(body: &GeneratorFamily, c: &Rational, prefix: &[u64], bound: u64) -> Result<Option<u64>> {
    let test = |last: u64| {
        let mut alpha = prefix.to_vec();
        alpha.push(last);
        contains_monomial(body, c, &alpha)
    };
    if !test(bound)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0u64, bound);
    if test(0)? {
        return Ok(Some(0));
    }
    // test(lo) false, test(hi) true
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if test(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

fn decode(mut idx: u64, side: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % side;
        idx /= side;
    }
    out
}

fn encode(prefix: &[u64], side: u64) -> usize {
    prefix.iter().fold(0u64, |acc, &x| acc * side + x) as usize
}

/// Minimal generators of `J(cφ)₀` among exponents in `[0, B]^n`.
pub fn minimal_generators(body: &GeneratorFamily, c: &Rational, bound: u64) -> Result<MonomialIdeal> {
    check_c(c)?;
    if bound == 0 {
        return Err(Error::InvalidArgument("box bound must be at least 1".into()));
    }
    let n = body.dim();
    let side = bound + 1;
    let prefixes = side
        .checked_pow(n as u32 - 1)
        .ok_or_else(|| Error::InvalidArgument("box too large".into()))?;
    let front: Vec<Option<u64>> = (0..prefixes)
        .into_par_iter()
        .map(|idx| frontier(body, c, &decode(idx, side, n - 1), bound))
        .collect::<Result<_>>()?;

    let mut generators = Vec::new();
    let mut complete = true;
    for idx in 0..prefixes {
        let prefix = decode(idx, side, n - 1);
        let Some(f) = front[idx as usize] else {
            continue;
        };
        // minimal iff every immediate predecessor needs a strictly larger last exponent
        let minimal = (0..n - 1).all(|i| {
            if prefix[i] == 0 {
                return true;
            }
            let mut pred = prefix.clone();
            pred[i] -= 1;
            match front[encode(&pred, side)] {
                None => true,
                Some(g) => g > f,
            }
        });
        if minimal {
            let mut alpha = prefix.clone();
            alpha.push(f);
            if alpha.iter().any(|&a| a == bound) {
                complete = false;
            }
            generators.push(alpha);
        }
        // the far face in each prefix coordinate must repeat the layer below
        for i in 0..n - 1 {
            if prefix[i] == bound {
                let mut below = prefix.clone();
                below[i] -= 1;
                if front[encode(&below, side)] != Some(f) {
                    complete = false;
                }
            }
        }
    }
    // far faces in prefix coordinates that are empty must stay empty below
    for idx in 0..prefixes {
        let prefix = decode(idx, side, n - 1);
        if front[idx as usize].is_none() {
            for i in 0..n - 1 {
                if prefix[i] == bound {
                    let mut below = prefix.clone();
                    below[i] -= 1;
                    if front[encode(&below, side)].is_some() {
                        complete = false;
                    }
                }
            }
        }
    }
    // the ideal is never zero, so an empty box has missed everything
    if generators.is_empty() {
        complete = false;
    }
    generators.sort();
    Ok(MonomialIdeal {
        dim: n,
        c: c.clone(),
        minimal_generators: generators,
        box_bound: bound,
        complete,
    })
}

/// Starting box `ceil(4·c·max coordinate)` and doubling while incomplete, up
/// to [`MAX_AUTO_BOX`].
pub fn minimal_generators_auto(body: &GeneratorFamily, c: &Rational) -> Result<MonomialIdeal> {
    check_c(c)?;
    let start = ceil_to_int(&(c * body.coordinate_bound() * Rational::from_integer(4.into())));
    let mut bound = if start <= BigInt::zero() {
        1
    } else {
        u64::try_from(start).unwrap_or(MAX_AUTO_BOX).clamp(1, MAX_AUTO_BOX)
    };
    loop {
        let ideal = minimal_generators(body, c, bound)?;
        if ideal.complete || bound >= MAX_AUTO_BOX {
            return Ok(ideal);
        }
        bound = (bound * 2).min(MAX_AUTO_BOX);
    }
}
