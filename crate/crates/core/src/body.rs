//! Newton convex bodies given by finitely described generators.
//!
//! A body is `P = conv(G) + R^n_+` where `G` holds finitely many points and
//! finitely many escaping tails `β_j = p + q·j + r/j` (`j ≥ 1`, `q ≠ 0`).
//! Because every tail escapes to infinity along a nonnegative direction the
//! union of the generator orthants is already closed under the closure in the
//! definition, so `P` is closed and membership questions reduce to finitely
//! many generators at a time.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{floor_sqrt, format_rational, Rational, RationalVec};

/// Number of projected points kept when a tail stops escaping under projection.
pub const PROJECTION_PREFIX: u64 = 8;

/// `β_j = p + q·j + r/j` for `j = 1, 2, …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TailSequence {
    p: RationalVec,
    q: RationalVec,
    r: RationalVec,
}

impl TailSequence {
    pub fn new(p: RationalVec, q: RationalVec, r: RationalVec) -> Result<Self> {
        let n = p.dim();
        q.check_dim(n)?;
        r.check_dim(n)?;
        for (name, v) in [("p", &p), ("q", &q), ("r", &r)] {
            if !v.is_nonnegative() {
                return Err(Error::InvalidBody(format!(
                    "tail {name} = {v} has a negative entry"
                )));
            }
        }
        if q.is_zero() {
            return Err(Error::InvalidBody(
                "tail must escape (q ≠ 0); give a convergent sequence as its limit point".into(),
            ));
        }
        Ok(TailSequence { p, q, r })
    }

    pub fn p(&self) -> &RationalVec {
        &self.p
    }

    pub fn q(&self) -> &RationalVec {
        &self.q
    }

    pub fn r(&self) -> &RationalVec {
        &self.r
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    /// `β_j`.
    pub fn point(&self, j: &BigInt) -> RationalVec {
        let jr = Rational::from_integer(j.clone());
        let inv = jr.recip();
        RationalVec::new(
            (0..self.dim())
                .map(|i| &self.p[i] + &self.q[i] * &jr + &self.r[i] * &inv)
                .collect(),
        )
    }

    pub fn point_at(&self, j: u64) -> RationalVec {
        self.point(&BigInt::from(j))
    }

    /// `p + q·j`, which lies below `β_k` for every `k ≥ j`.
    pub fn floor_point(&self, j: &BigInt) -> RationalVec {
        let jr = Rational::from_integer(j.clone());
        self.p.add(&self.q.scale(&jr))
    }

    /// `β_1 = p + q + r`, the coordinatewise largest point of the tail in
    /// coordinates where `q` vanishes.
    pub fn first_point(&self) -> RationalVec {
        self.point_at(1)
    }

    pub fn scale(&self, m: &Rational) -> TailSequence {
        TailSequence {
            p: self.p.scale(m),
            q: self.q.scale(m),
            r: self.r.scale(m),
        }
    }

    /// `inf_j ⟨λ, β_j⟩` with the minimising index when there is one.
    pub fn support(&self, lambda: &RationalVec) -> (Rational, Option<BigInt>) {
        let a = lambda.dot(&self.p);
        let b = lambda.dot(&self.q);
        let c = lambda.dot(&self.r);
        if b.is_zero() {
            // constant plus c/j: attained only when c = 0
            let at = c.is_zero().then(BigInt::one);
            return (a, at);
        }
        if c.is_zero() {
            return (a + b, Some(BigInt::one()));
        }
        let j0 = floor_sqrt(&(&c / &b));
        let lo = if j0 < BigInt::one() { BigInt::one() } else { j0.clone() };
        let hi = j0 + 1;
        let eval = |j: &BigInt| {
            let jr = Rational::from_integer(j.clone());
            &a + &b * &jr + &c / &jr
        };
        let (vlo, vhi) = (eval(&lo), eval(&hi));
        if vhi < vlo {
            (vhi, Some(hi))
        } else {
            (vlo, Some(lo))
        }
    }
}

/// A generator of a body: a finite point, or a specific term of a tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorRef {
    Point { index: usize },
    Tail {
        index: usize,
        #[serde(serialize_with = "serialize_bigint")]
        j: BigInt,
    },
}

fn serialize_bigint<S: serde::Serializer>(
    j: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&j.to_string())
}

/// Infimum of `⟨λ,g⟩` over all generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportValue {
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
    pub attained: bool,
    /// First generator reaching the value, when it is reached.
    pub witness: Option<GeneratorRef>,
}

pub(crate) fn serialize_rational<S: serde::Serializer>(
    r: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// A weight term of a toric Siu-type function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightTerm {
    /// `log |z^a|`, contributing the point `a`.
    Monomial(RationalVec),
    /// The family `a_j = p + q·j + r/j`.
    Tail {
        p: RationalVec,
        q: RationalVec,
        r: RationalVec,
    },
}

/// `P = conv(points ∪ tails) + R^n_+`, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GeneratorFamily {
    dim: usize,
    points: Vec<RationalVec>,
    tails: Vec<TailSequence>,
}

impl GeneratorFamily {
    pub fn new(dim: usize, points: Vec<RationalVec>, tails: Vec<TailSequence>) -> Result<Self> {
        let body = GeneratorFamily { dim, points, tails };
        body.validate()?;
        Ok(body)
    }

    pub fn from_points(points: Vec<RationalVec>) -> Result<Self> {
        let dim = points.first().map(RationalVec::dim).ok_or(Error::EmptyPointSet)?;
        Self::new(dim, points, Vec::new())
    }

    /// Re-checks every invariant: dimension, nonnegativity, escaping tails,
    /// at least one generator.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidBody("dimension must be positive".into()));
        }
        if self.points.is_empty() && self.tails.is_empty() {
            return Err(Error::InvalidBody("body needs at least one generator".into()));
        }
        for p in &self.points {
            p.check_dim(self.dim)?;
            if !p.is_nonnegative() {
                return Err(Error::InvalidBody(format!("point {p} has a negative entry")));
            }
        }
        for t in &self.tails {
            t.p.check_dim(self.dim)?;
            TailSequence::new(t.p.clone(), t.q.clone(), t.r.clone())?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[RationalVec] {
        &self.points
    }

    pub fn tails(&self) -> &[TailSequence] {
        &self.tails
    }

    pub fn is_polyhedral(&self) -> bool {
        self.tails.is_empty()
    }

    pub fn generator(&self, g: &GeneratorRef) -> Result<RationalVec> {
        match g {
            GeneratorRef::Point { index } => self
                .points
                .get(*index)
                .cloned()
                .ok_or_else(|| Error::InvalidArgument(format!("no point #{index}"))),
            GeneratorRef::Tail { index, j } => {
                if !j.is_positive() {
                    return Err(Error::InvalidArgument(format!("tail index j = {j} < 1")));
                }
                self.tails
                    .get(*index)
                    .map(|t| t.point(j))
                    .ok_or_else(|| Error::InvalidArgument(format!("no tail #{index}")))
            }
        }
    }

    /// `m·P`.
    pub fn scale(&self, m: &Rational) -> Result<GeneratorFamily> {
        if !m.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive, got {}",
                format_rational(m)
            )));
        }
        Ok(GeneratorFamily {
            dim: self.dim,
            points: self.points.iter().map(|p| p.scale(m)).collect(),
            tails: self.tails.iter().map(|t| t.scale(m)).collect(),
        })
    }

    /// Closure of the coordinate projection onto `coords` (0-based, strictly
    /// increasing).
    pub fn project(&self, coords: &[usize]) -> Result<GeneratorFamily> {
        check_coords(coords, self.dim)?;
        let mut points = Vec::new();
        let mut seen = HashSet::new();
        let mut push = |v: RationalVec, points: &mut Vec<RationalVec>| {
            if seen.insert(v.clone()) {
                points.push(v);
            }
        };
        for p in &self.points {
            push(p.select(coords), &mut points);
        }
        let mut tails = Vec::new();
        for t in &self.tails {
            let q = t.q.select(coords);
            if q.is_zero() {
                push(t.p.select(coords), &mut points);
                for j in 1..=PROJECTION_PREFIX {
                    push(t.point_at(j).select(coords), &mut points);
                }
            } else {
                let tail = TailSequence {
                    p: t.p.select(coords),
                    q,
                    r: t.r.select(coords),
                };
                if !tails.contains(&tail) {
                    tails.push(tail);
                }
            }
        }
        Ok(GeneratorFamily {
            dim: coords.len(),
            points,
            tails,
        })
    }

    /// `h_P(λ) = inf_{x ∈ P} ⟨λ,x⟩` for `λ ≥ 0, λ ≠ 0`.
    pub fn support(&self, lambda: &RationalVec) -> Result<SupportValue> {
        lambda.check_dim(self.dim)?;
        if !lambda.is_nonnegative() || lambda.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "support direction must be nonnegative and nonzero, got {lambda}"
            )));
        }
        let mut best: Option<(Rational, Option<GeneratorRef>)> = None;
        let mut consider = |value: Rational, at: Option<GeneratorRef>| {
            let replace = match &best {
                None => true,
                Some((v, w)) => value < *v || (value == *v && w.is_none() && at.is_some()),
            };
            if replace {
                best = Some((value, at));
            }
        };
        for (index, p) in self.points.iter().enumerate() {
            consider(lambda.dot(p), Some(GeneratorRef::Point { index }));
        }
        for (index, t) in self.tails.iter().enumerate() {
            let (v, j) = t.support(lambda);
            consider(v, j.map(|j| GeneratorRef::Tail { index, j }));
        }
        let (value, witness) = best.expect("validated body has a generator");
        Ok(SupportValue {
            value,
            attained: witness.is_some(),
            witness,
        })
    }

    /// Finite points together with `β_1..β_J` of every tail, deduplicated in
    /// first-seen order.
    pub fn truncate(&self, j_max: u64) -> Vec<RationalVec> {
        self.truncate_with_refs(j_max).into_iter().map(|(v, _)| v).collect()
    }

    pub fn truncate_with_refs(&self, j_max: u64) -> Vec<(RationalVec, GeneratorRef)> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (index, p) in self.points.iter().enumerate() {
            if seen.insert(p.clone()) {
                out.push((p.clone(), GeneratorRef::Point { index }));
            }
        }
        for j in 1..=j_max.max(1) {
            for (index, t) in self.tails.iter().enumerate() {
                let v = t.point_at(j);
                if seen.insert(v.clone()) {
                    out.push((
                        v,
                        GeneratorRef::Tail {
                            index,
                            j: BigInt::from(j),
                        },
                    ));
                }
            }
        }
        out
    }

    /// Largest coordinate over finite points and the first tail terms. Every
    /// coordinate that stays bounded along a tail is at most this value.
    pub fn coordinate_bound(&self) -> Rational {
        let mut m = Rational::zero();
        let firsts: Vec<RationalVec> = self.tails.iter().map(TailSequence::first_point).collect();
        for v in self.points.iter().chain(&firsts) {
            for x in v.iter() {
                if *x > m {
                    m = x.clone();
                }
            }
        }
        m
    }

    /// Per-coordinate version of [`Self::coordinate_bound`].
    pub fn coordinate_bounds(&self) -> Vec<Rational> {
        let firsts: Vec<RationalVec> = self.tails.iter().map(TailSequence::first_point).collect();
        (0..self.dim)
            .map(|i| {
                self.points
                    .iter()
                    .chain(&firsts)
                    .map(|v| v[i].clone())
                    .max()
                    .unwrap_or_else(Rational::zero)
            })
            .collect()
    }
}

pub(crate) fn check_coords(coords: &[usize], dim: usize) -> Result<()> {
    if coords.is_empty() {
        return Err(Error::InvalidArgument("coordinate set is empty".into()));
    }
    if coords.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "coordinates must be strictly increasing".into(),
        ));
    }
    if let Some(&i) = coords.iter().find(|&&i| i >= dim) {
        return Err(Error::InvalidArgument(format!(
            "coordinate {} out of range for dimension {dim}",
            i + 1
        )));
    }
    Ok(())
}

/// Newton body of `sup` of the given monomial and tail weights.
pub fn from_siu_weights(dim: usize, terms: &[WeightTerm]) -> Result<GeneratorFamily> {
    if terms.is_empty() {
        return Err(Error::InvalidBody("no weight terms".into()));
    }
    let mut points = Vec::new();
    let mut tails = Vec::new();
    for t in terms {
        match t {
            WeightTerm::Monomial(a) => points.push(a.clone()),
            WeightTerm::Tail { p, q, r } => {
                tails.push(TailSequence::new(p.clone(), q.clone(), r.clone())?)
            }
        }
    }
    GeneratorFamily::new(dim, points, tails)
}

/// The tail `(1 + 1/j, 1 + j)` and its mirror image, whose body is bounded by
/// the hyperbola `(x − 1)(y − 1) = 1`.
pub fn hyperbola_body() -> GeneratorFamily {
    let v = RationalVec::from_ints;
    GeneratorFamily::new(
        2,
        Vec::new(),
        vec![
            TailSequence::new(v(&[1, 1]), v(&[0, 1]), v(&[1, 0])).unwrap(),
            TailSequence::new(v(&[1, 1]), v(&[1, 0]), v(&[0, 1])).unwrap(),
        ],
    )
    .unwrap()
}
