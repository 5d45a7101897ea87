//! Cluster points of jumping numbers.
//!
//! `m` is a cluster point when some `A = {x_I = a}` with `a` a positive
//! integer vector is asymptotic to `m·P` yet misses `m·P`. Dividing by `m`,
//! this says `a/m` is an unattained boundary point of `cl π_I(P)`. For a fixed
//! `(I, a)` the only candidate scale is the projected gauge of `a`, so the
//! search runs over integer offsets rather than over scales.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotes::{is_asymptotic_with, CoordinateSubspace};
use crate::body::{serialize_rational, GeneratorFamily};
use crate::error::{Error, Result};
use crate::exact::{ceil_to_int, Rational, RationalVec};
use crate::jumping::{gauge_with, jumping_number, GaugeValue};
use crate::membership::{is_attained, SearchOptions};

/// `{x_I = a}` for `m·P` together with the ratio `a/m` it pins down in `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterWitness {
    #[serde(serialize_with = "serialize_rational")]
    pub m: Rational,
    /// Integer offsets, a subspace of `m·P`.
    pub subspace: CoordinateSubspace,
    /// `a/m`, an unattained boundary point of `cl π_I(P)`.
    pub ratio: RationalVec,
}

impl ClusterWitness {
    /// Re-checks closure, non-interior and non-attainment of `a/m`.
    pub fn verify(&self, body: &GeneratorFamily, opts: &SearchOptions) -> Result<bool> {
        if !self.subspace.has_positive_integer_offsets()
            || self.ratio.scale(&self.m) != *self.subspace.offsets()
        {
            return Ok(false);
        }
        let coords = self.subspace.coords();
        let in_p = CoordinateSubspace::new(body.dim(), coords.to_vec(), self.ratio.clone())?;
        if !is_asymptotic_with(body, &in_p, opts)?.asymptotic {
            return Ok(false);
        }
        Ok(!is_attained(body, coords, &self.ratio, opts)?.answer)
    }
}

/// Scales `k·step` sharing one subspace shape `(I, a/m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Progression {
    /// 1-based in output.
    #[serde(serialize_with = "serialize_coords")]
    pub coords: Vec<usize>,
    pub ratio: RationalVec,
    /// Smallest `m > 0` with `m·ratio` integral.
    #[serde(serialize_with = "serialize_rational")]
    pub step: Rational,
    pub values: Vec<String>,
}

fn serialize_coords<S: serde::Serializer>(c: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|i| i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterReport {
    #[serde(serialize_with = "serialize_rational")]
    pub max_value: Rational,
    /// Per-coordinate offset caps `ceil(M · coordinate bound)`.
    pub offset_caps: Vec<u64>,
    pub candidates: usize,
    #[serde(serialize_with = "serialize_values")]
    pub values: Vec<Rational>,
    pub progressions: Vec<Progression>,
    /// One per value, in the same order.
    pub witnesses: Vec<ClusterWitness>,
    /// Smallest gap between consecutive values, counting the gap from 0.
    pub min_gap: Option<RationalString>,
}

/// A rational serialized as its text form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalString(pub Rational);

impl Serialize for RationalString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_rational(&self.0, s)
    }
}

fn serialize_values<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| crate::exact::format_rational(r)))
}

impl ClusterReport {
    pub fn verify(&self, body: &GeneratorFamily, opts: &SearchOptions) -> Result<bool> {
        if self.witnesses.len() != self.values.len() {
            return Ok(false);
        }
        for (m, w) in self.values.iter().zip(&self.witnesses) {
            if w.m != *m || !w.verify(body, opts)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n) - 1).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

fn offset_caps(body: &GeneratorFamily, scale: &Rational) -> Vec<u64> {
    body.coordinate_bounds()
        .iter()
        .map(|b| ceil_to_int(&(b * scale)).to_u64().unwrap_or(u64::MAX).max(1))
        .collect()
}

fn integer_grid(caps: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &c in caps {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=c).map(move |a| {
                    let mut v = prefix.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

fn to_rationals(a: &[u64]) -> RationalVec {
    RationalVec::new(a.iter().map(|&x| Rational::from_integer(x.into())).collect())
}

/// `lcm` of the reciprocals: the least `m > 0` making `m·ratio` integral.
fn progression_step(ratio: &RationalVec) -> Rational {
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for r in ratio.iter() {
        num_gcd = num_gcd.gcd(r.numer());
        den_lcm = den_lcm.lcm(r.denom());
    }
    Rational::new(den_lcm, num_gcd)
}

pub fn cluster_points(body: &GeneratorFamily, max_value: &Rational) -> Result<ClusterReport> {
    cluster_points_with(body, max_value, &SearchOptions::default())
}

pub fn cluster_points_with(
    body: &GeneratorFamily,
    max_value: &Rational,
    opts: &SearchOptions,
) -> Result<ClusterReport> {
    if !max_value.is_positive() {
        return Err(Error::InvalidArgument("M must be positive".into()));
    }
    let n = body.dim();
    let caps = offset_caps(body, max_value);
    let mut candidates = Vec::new();
    for coords in subsets(n) {
        let proj = body.project(&coords)?;
        let sub_caps: Vec<u64> = coords.iter().map(|&i| caps[i]).collect();
        for a in integer_grid(&sub_caps) {
            candidates.push((coords.clone(), proj.clone(), a));
        }
    }
    let scales: Vec<Option<(Vec<usize>, Vec<u64>, Rational)>> = candidates
        .par_iter()
        .map(|(coords, proj, a)| match gauge_with(proj, &to_rationals(a), opts) {
            Ok(g) if g.value <= *max_value => Ok(Some((coords.clone(), a.clone(), g.value))),
            Ok(_) => Ok(None),
            // the projection is the whole orthant: no boundary at all
            Err(Error::Unbounded(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;

    // group by shape; attainment depends only on the ratio
    let mut shapes: BTreeMap<(Vec<usize>, RationalVec), Vec<(Rational, Vec<u64>)>> = BTreeMap::new();
    for (coords, a, m) in scales.into_iter().flatten() {
        let ratio = to_rationals(&a).scale(&m.recip());
        shapes.entry((coords, ratio)).or_default().push((m, a));
    }
    let keys: Vec<&(Vec<usize>, RationalVec)> = shapes.keys().collect();
    let unattained: Vec<bool> = keys
        .par_iter()
        .map(|(coords, ratio)| {
            let sub = CoordinateSubspace::new(n, coords.clone(), ratio.clone())?;
            if !is_asymptotic_with(body, &sub, opts)?.asymptotic {
                return Err(Error::Internal(format!(
                    "projected gauge left {sub} off the boundary"
                )));
            }
            Ok(!is_attained(body, coords, ratio, opts)?.answer)
        })
        .collect::<Result<_>>()?;

    let mut progressions = Vec::new();
    let mut by_value: BTreeMap<Rational, ClusterWitness> = BTreeMap::new();
    for ((key, found), keep) in shapes.iter().zip(unattained) {
        if !keep {
            continue;
        }
        let (coords, ratio) = key;
        let mut found = found.clone();
        found.sort();
        for (m, a) in &found {
            by_value.entry(m.clone()).or_insert_with(|| ClusterWitness {
                m: m.clone(),
                subspace: CoordinateSubspace::new(n, coords.clone(), to_rationals(a))
                    .expect("offsets checked"),
                ratio: ratio.clone(),
            });
        }
        progressions.push(Progression {
            coords: coords.clone(),
            ratio: ratio.clone(),
            step: progression_step(ratio),
            values: found.iter().map(|(m, _)| crate::exact::format_rational(m)).collect(),
        });
    }
    let values: Vec<Rational> = by_value.keys().cloned().collect();
    let witnesses: Vec<ClusterWitness> = by_value.into_values().collect();
    let min_gap = values
        .iter()
        .scan(Rational::zero(), |prev, v| {
            let gap = v - &*prev;
            *prev = v.clone();
            Some(gap)
        })
        .min()
        .map(RationalString);
    Ok(ClusterReport {
        max_value: max_value.clone(),
        offset_caps: caps,
        candidates: candidates.len(),
        values,
        progressions,
        witnesses,
        min_gap,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterPointVerdict {
    #[serde(serialize_with = "serialize_rational")]
    pub m: Rational,
    pub is_cluster: bool,
    pub witness: Option<ClusterWitness>,
    /// Subspaces of `m·P` with positive integer offsets that are asymptotic
    /// but meet `m·P`, so they do not count.
    pub attained: Vec<CoordinateSubspace>,
}

pub fn is_cluster_point(body: &GeneratorFamily, m: &Rational) -> Result<ClusterPointVerdict> {
    is_cluster_point_with(body, m, &SearchOptions::default())
}

pub fn is_cluster_point_with(
    body: &GeneratorFamily,
    m: &Rational,
    opts: &SearchOptions,
) -> Result<ClusterPointVerdict> {
    if !m.is_positive() {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let n = body.dim();
    let caps = offset_caps(body, m);
    let mut candidates = Vec::new();
    for coords in subsets(n) {
        let sub_caps: Vec<u64> = coords.iter().map(|&i| caps[i]).collect();
        for a in integer_grid(&sub_caps) {
            candidates.push((coords.clone(), a));
        }
    }
    // None: not asymptotic; Some(true): unattained witness
    let outcomes: Vec<Option<bool>> = candidates
        .par_iter()
        .map(|(coords, a)| {
            let ratio = to_rationals(a).scale(&m.recip());
            let sub = CoordinateSubspace::new(n, coords.clone(), ratio.clone())?;
            if !is_asymptotic_with(body, &sub, opts)?.asymptotic {
                return Ok(None);
            }
            Ok(Some(!is_attained(body, coords, &ratio, opts)?.answer))
        })
        .collect::<Result<_>>()?;
    let mut witness = None;
    let mut attained = Vec::new();
    for ((coords, a), outcome) in candidates.iter().zip(outcomes) {
        let sub = CoordinateSubspace::new(n, coords.clone(), to_rationals(a))?;
        match outcome {
            Some(true) if witness.is_none() => {
                witness = Some(ClusterWitness {
                    m: m.clone(),
                    ratio: sub.offsets().scale(&m.recip()),
                    subspace: sub,
                })
            }
            Some(false) => attained.push(sub),
            _ => {}
        }
    }
    Ok(ClusterPointVerdict {
        m: m.clone(),
        is_cluster: witness.is_some(),
        witness,
        attained,
    })
}

/// How the free coordinates of witness lattice points grow: `k^degree` for
/// the `k`-th candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Spacing {
    pub degree: u32,
}

impl Spacing {
    /// `1, 2, 3, …`
    pub const LINEAR: Spacing = Spacing { degree: 1 };

    fn coordinate(self, k: u64) -> Option<u64> {
        k.checked_pow(self.degree)
    }
}

impl Default for Spacing {
    fn default() -> Self {
        Spacing::LINEAR
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessTerm {
    /// Lattice exponent `x`; its jumping number is the gauge of `x + 1`.
    pub point: Vec<u64>,
    pub gauge: GaugeValue,
}

/// Lattice points on the witness subspace shifted by `−1` whose jumping
/// numbers increase strictly towards `m`.
pub fn witness_sequence(
    body: &GeneratorFamily,
    m: &Rational,
    count: usize,
    spacing: Spacing,
) -> Result<Vec<WitnessTerm>> {
    let verdict = is_cluster_point(body, m)?;
    let Some(w) = verdict.witness else {
        return Err(Error::InvalidArgument(format!(
            "{} is not a cluster point",
            crate::exact::format_rational(m)
        )));
    };
    let n = body.dim();
    let mut base = vec![0u64; n];
    for (i, a) in w.subspace.coords().iter().zip(w.subspace.offsets().iter()) {
        base[*i] = a.to_integer().to_u64().expect("small offset") - 1;
    }
    let free: Vec<usize> = (0..n).filter(|i| !w.subspace.coords().contains(i)).collect();
    let mut out: Vec<WitnessTerm> = Vec::with_capacity(count);
    let max_tries = 64 * count as u64 + 1024;
    let mut k = 0u64;
    while out.len() < count {
        k += 1;
        let y = match spacing.coordinate(k) {
            Some(y) if k <= max_tries && y > 0 => y,
            _ => {
                return Err(Error::Undecided {
                    what: "witness sequence stopped increasing".into(),
                    iterations: k as usize,
                })
            }
        };
        let mut point = base.clone();
        for &i in &free {
            point[i] = y;
        }
        let g = jumping_number(body, &point)?;
        if g.value >= *m {
            return Err(Error::Internal(format!(
                "witness point {point:?} reaches the cluster value"
            )));
        }
        if out.last().is_none_or(|t| g.value > t.gauge.value) {
            out.push(WitnessTerm { point, gauge: g });
        }
    }
    Ok(out)
}
