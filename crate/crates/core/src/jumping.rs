//! Jumping numbers as gauges of the Newton body.
//!
//! The jumping number of the monomial `z^α` is `ξ(α + 1)` where
//! `ξ(u) = max{c : u ∈ c·P}`. Over the generators this is the semi-infinite LP
//! `max Σ v_g` subject to `Σ v_g g ≤ u, v ≥ 0`, whose dual is
//! `min ⟨λ,u⟩` over `λ ≥ 0` with `⟨λ,g⟩ ≥ 1` for every generator. It is solved
//! by column generation: the restricted LP runs on finitely many generators
//! and the exact support function prices the rest.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::body::{serialize_rational, GeneratorFamily, GeneratorRef};
use crate::error::{Error, Result};
use crate::exact::{primitive_integer, solve_lp, LinearProgram, LpOutcome, Rational, RationalVec};
use crate::membership::{combination_point, SearchOptions, WeightedGenerator};

/// Cap on column-generation rounds for a single gauge.
const MAX_ROUNDS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaugeWitness {
    /// `normal` is a primitive integer vector whose support value is attained
    /// by a generator.
    Facet {
        normal: RationalVec,
        #[serde(serialize_with = "serialize_rational")]
        support: Rational,
    },
    /// The support value is only approached along tails; `subset` is the
    /// support of the normal.
    Limit {
        normal: RationalVec,
        #[serde(serialize_with = "serialize_rational")]
        support: Rational,
        subset: Vec<usize>,
    },
}

impl GaugeWitness {
    pub fn normal(&self) -> &RationalVec {
        match self {
            GaugeWitness::Facet { normal, .. } | GaugeWitness::Limit { normal, .. } => normal,
        }
    }

    pub fn support(&self) -> &Rational {
        match self {
            GaugeWitness::Facet { support, .. } | GaugeWitness::Limit { support, .. } => support,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeValue {
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
    /// Upper bound: `⟨normal,u⟩ = value · support`.
    pub witness: GaugeWitness,
    /// Lower bound: a convex combination `x` of generators with
    /// `value · x ≤ u`.
    pub lower: Vec<WeightedGenerator<Rational>>,
    pub iterations: usize,
}

impl GaugeValue {
    /// Re-checks both bounds with exact arithmetic.
    pub fn verify(&self, body: &GeneratorFamily, u: &RationalVec) -> Result<bool> {
        let normal = self.witness.normal();
        if normal.dim() != u.dim() || !normal.is_nonnegative() || normal.is_zero() {
            return Ok(false);
        }
        let h = body.support(normal)?;
        if h.value != *self.witness.support() || normal.dot(u) != &self.value * &h.value {
            return Ok(false);
        }
        if h.attained != matches!(self.witness, GaugeWitness::Facet { .. }) {
            return Ok(false);
        }
        let Some(x) = combination_point(body, &self.lower)? else {
            return Ok(false);
        };
        Ok(x.iter().zip(u.iter()).all(|(a, b)| &self.value * a <= *b))
    }
}

fn restricted_lp(cols: &[(RationalVec, GeneratorRef)], u: &RationalVec) -> LinearProgram<Rational> {
    let n = u.dim();
    let m = cols.len();
    let mut a = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![Rational::zero(); m + n];
        for (g, (p, _)) in cols.iter().enumerate() {
            row[g] = p[i].clone();
        }
        row[m + i] = Rational::one();
        a.push(row);
    }
    let mut c = vec![Rational::one(); m];
    c.extend((0..n).map(|_| Rational::zero()));
    LinearProgram {
        a,
        b: u.entries().to_vec(),
        c,
    }
}

pub fn gauge(body: &GeneratorFamily, u: &RationalVec) -> Result<GaugeValue> {
    gauge_with(body, u, &SearchOptions::default())
}

/// Exact `max{c : u ∈ c·P}` for `u > 0`.
pub fn gauge_with(body: &GeneratorFamily, u: &RationalVec, opts: &SearchOptions) -> Result<GaugeValue> {
    u.check_dim(body.dim())?;
    if !u.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "gauge needs a strictly positive point, got {u}"
        )));
    }
    let mut cols: Vec<(RationalVec, GeneratorRef)> = body.truncate_with_refs(1);
    for iterations in 1..=MAX_ROUNDS {
        let (x, y, value) = match solve_lp(&restricted_lp(&cols, u))? {
            LpOutcome::Optimal { x, y, value } => (x, y, value),
            LpOutcome::Unbounded { .. } => {
                return Err(Error::Unbounded(
                    "a generator sits at the origin, so every gauge is infinite".into(),
                ))
            }
            LpOutcome::Infeasible { .. } => {
                return Err(Error::Internal("gauge LP is always feasible".into()))
            }
        };
        let lambda = RationalVec::new(y);
        let mut added = false;
        for (index, t) in body.tails().iter().enumerate() {
            let (v, at) = t.support(&lambda);
            if v >= Rational::one() {
                continue;
            }
            let j = match at {
                Some(j) => j,
                None => {
                    // a + c/j < 1 once j > c/(1 − a); at least double the
                    // deepest term so far so that limits are reached quickly
                    let a = lambda.dot(t.p());
                    let c = lambda.dot(t.r());
                    let need = (c / (Rational::one() - a)).floor().to_integer() + BigInt::one();
                    let deepest = cols
                        .iter()
                        .filter_map(|(_, g)| match g {
                            GeneratorRef::Tail { index: k, j } if *k == index => Some(j.clone()),
                            _ => None,
                        })
                        .max()
                        .unwrap_or_else(BigInt::one);
                    need.max(deepest * 2)
                }
            };
            if j > BigInt::from(opts.max_j) {
                return Err(Error::Undecided {
                    what: "gauge".into(),
                    iterations,
                });
            }
            let g = GeneratorRef::Tail { index, j };
            if cols.iter().any(|(_, r)| *r == g) {
                return Err(Error::Internal("column generation repeated a column".into()));
            }
            cols.push((body.generator(&g)?, g));
            added = true;
        }
        if added {
            continue;
        }
        // λ is feasible for the full dual, so the restricted optimum is exact.
        let normal = primitive_integer(&lambda);
        let h = body.support(&normal)?;
        if normal.dot(u) != &value * &h.value {
            return Err(Error::Internal("gauge bounds disagree".into()));
        }
        let witness = if h.attained {
            GaugeWitness::Facet {
                normal,
                support: h.value,
            }
        } else {
            let subset = normal.support();
            GaugeWitness::Limit {
                normal,
                support: h.value,
                subset,
            }
        };
        let lower = cols
            .iter()
            .zip(&x)
            .filter(|(_, v)| !v.is_zero())
            .map(|((_, g), v)| WeightedGenerator {
                generator: g.clone(),
                weight: v / &value,
            })
            .collect();
        return Ok(GaugeValue {
            value,
            witness,
            lower,
            iterations,
        });
    }
    Err(Error::Undecided {
        what: "gauge".into(),
        iterations: MAX_ROUNDS,
    })
}

/// Jumping number of the monomial with exponent `alpha`, i.e. the gauge of
/// `α + 1`.
pub fn jumping_number(body: &GeneratorFamily, alpha: &[u64]) -> Result<GaugeValue> {
    gauge(body, &shifted(alpha))
}

pub(crate) fn shifted(alpha: &[u64]) -> RationalVec {
    RationalVec::new(
        alpha
            .iter()
            .map(|&a| Rational::from_integer(BigInt::from(a) + 1))
            .collect(),
    )
}

/// Witnesses kept per value; the multiplicity counts all of them.
pub const MAX_WITNESSES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JumpingEntry {
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
    /// Number of exponents in the box with this jumping number.
    pub multiplicity: usize,
    /// The first few of those exponents in lexicographic order.
    pub witnesses: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JumpingTable {
    #[serde(serialize_with = "serialize_rational")]
    pub max_value: Rational,
    pub lattice_bound: u64,
    /// Always true: exponents outside `[0, N]^n` are not examined, and near a
    /// cluster point they contribute values missing from this table.
    pub partial: bool,
    pub entries: Vec<JumpingEntry>,
}

impl JumpingTable {
    pub fn values(&self) -> Vec<Rational> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }
}

/// Distinct jumping numbers `≤ max_value` of exponents in `[0, N]^n`.
pub fn jumping_numbers_up_to(
    body: &GeneratorFamily,
    max_value: &Rational,
    lattice_bound: u64,
) -> Result<JumpingTable> {
    if *max_value <= Rational::zero() {
        return Err(Error::InvalidArgument("bound M must be positive".into()));
    }
    if lattice_bound == 0 {
        return Err(Error::InvalidArgument("lattice bound must be at least 1".into()));
    }
    let n = body.dim();
    let side = lattice_bound + 1;
    let prefixes = side
        .checked_pow(n as u32 - 1)
        .ok_or_else(|| Error::InvalidArgument("lattice box too large".into()))?;
    // Parallel over all but the last coordinate; along the last one the gauge
    // is nondecreasing, so each row stops at the first value above M.
    let rows: Vec<Vec<(Rational, Vec<u64>)>> = (0..prefixes)
        .into_par_iter()
        .map(|idx| {
            let mut alpha = decode(idx, side, n - 1);
            alpha.push(0);
            let mut found = Vec::new();
            for last in 0..side {
                alpha[n - 1] = last;
                let g = jumping_number(body, &alpha)?;
                if g.value > *max_value {
                    break;
                }
                found.push((g.value, alpha.clone()));
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    let mut table: BTreeMap<Rational, (usize, Vec<Vec<u64>>)> = BTreeMap::new();
    for (value, alpha) in rows.into_iter().flatten() {
        let e = table.entry(value).or_default();
        e.0 += 1;
        e.1.push(alpha);
    }
    let entries = table
        .into_iter()
        .map(|(value, (multiplicity, mut witnesses))| {
            witnesses.sort();
            witnesses.truncate(MAX_WITNESSES);
            JumpingEntry {
                value,
                multiplicity,
                witnesses,
            }
        })
        .collect();
    Ok(JumpingTable {
        max_value: max_value.clone(),
        lattice_bound,
        partial: true,
        entries,
    })
}

fn decode(mut idx: u64, side: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % side;
        idx /= side;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::hyperbola_body;
    use crate::exact::{int, rat};

    fn v(x: &[i64]) -> RationalVec {
        RationalVec::from_ints(x)
    }

    fn monomial() -> GeneratorFamily {
        GeneratorFamily::from_points(vec![v(&[2, 0]), v(&[0, 3])]).unwrap()
    }

    #[test]
    fn monomial_lct() {
        let b = monomial();
        let u = v(&[1, 1]);
        let g = gauge(&b, &u).unwrap();
        assert_eq!(g.value, rat(5, 6));
        assert_eq!(
            g.witness,
            GaugeWitness::Facet {
                normal: v(&[3, 2]),
                support: int(6)
            }
        );
        assert!(g.verify(&b, &u).unwrap());
    }

    #[test]
    fn hyperbola_edge() {
        let h = hyperbola_body();
        let u = v(&[2, 3]);
        let g = gauge(&h, &u).unwrap();
        assert_eq!(g.value, rat(7, 6));
        assert_eq!(
            g.witness,
            GaugeWitness::Facet {
                normal: v(&[2, 1]),
                support: int(6)
            }
        );
        assert!(g.verify(&h, &u).unwrap());
        assert_eq!(gauge(&h, &v(&[2, 2])).unwrap().value, int(1));
    }

    #[test]
    fn orthant_translate() {
        let b = GeneratorFamily::from_points(vec![v(&[1, 1, 1])]).unwrap();
        assert_eq!(gauge(&b, &v(&[3, 7, 5])).unwrap().value, int(3));
    }

    #[test]
    fn far_from_the_origin_along_the_asymptote() {
        let h = hyperbola_body();
        let u = v(&[1, 500]);
        let g = gauge(&h, &u).unwrap();
        assert!(g.verify(&h, &u).unwrap());
        assert!(g.value < int(1));
        assert!(g.value > rat(95, 100));
    }

    #[test]
    fn origin_generator_is_unbounded() {
        let b = GeneratorFamily::from_points(vec![v(&[0, 0])]).unwrap();
        assert!(matches!(gauge(&b, &v(&[1, 1])), Err(Error::Unbounded(_))));
        assert!(gauge(&monomial(), &v(&[0, 1])).is_err());
    }

    #[test]
    fn monomial_jumping_numbers() {
        let t = jumping_numbers_up_to(&monomial(), &int(2), 6).unwrap();
        assert_eq!(
            t.values(),
            vec![rat(5, 6), rat(7, 6), rat(4, 3), rat(3, 2), rat(5, 3), rat(11, 6), int(2)]
        );
        let b = GeneratorFamily::from_points(vec![v(&[1, 1])]).unwrap();
        let t = jumping_numbers_up_to(&b, &int(3), 5).unwrap();
        assert_eq!(t.values(), vec![int(1), int(2), int(3)]);
        assert_eq!(t.entries[0].witnesses[0], vec![0, 0]);
    }
}
