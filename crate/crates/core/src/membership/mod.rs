//! Certified interior, closure and attainment tests.
//!
//! Each tail is seen through two finite pictures. The inner one keeps
//! `β_1..β_J`; its hull lies inside `P`, so a strict domination found there is
//! a witness for the full body. The outer one adds the floor point `p + J·q`,
//! which lies below every `β_j` with `j ≥ J`; its hull contains `P`, so a
//! separating normal found there also separates `P`. Every normal is
//! re-checked against the exact support function before it is returned.

mod attain;

pub use attain::{is_attained, verify_unattained, AttainmentLp};

use serde::Serialize;

use crate::body::{GeneratorFamily, GeneratorRef};
use crate::error::{Error, Result};
use crate::exact::{
    format_rational, solve_domination, EpsRational, OrderedField, Rational, RationalVec,
};

/// Limits for the certificate search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest tail index the search may truncate at before giving up.
    pub max_j: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_j: 1 << 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct WeightedGenerator<F: OrderedField> {
    pub generator: GeneratorRef,
    #[serde(serialize_with = "serialize_field")]
    pub weight: F,
}

pub(crate) fn serialize_field<F: OrderedField, S: serde::Serializer>(
    x: &F,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x.to_rational() {
        Some(r) => s.serialize_str(&format_rational(&r)),
        None => s.serialize_str(&x.to_string()),
    }
}

/// Dual data proving that a coordinate projection does not reach a point;
/// see [`AttainmentLp`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnattainedProof {
    pub coords: Vec<usize>,
    /// Truncation index of the outer relaxation.
    pub j_max: u64,
    /// Segment tails shown to carry no weight, in order, with the dual vector
    /// bounding their segment parameter by zero.
    pub excluded: Vec<(usize, RationalVec)>,
    /// Farkas vector of the remaining relaxation.
    pub farkas: RationalVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "")]
pub enum Certificate<F: OrderedField> {
    /// A convex combination of generators strictly below the query point.
    InteriorWitness { combination: Vec<WeightedGenerator<F>> },
    /// `⟨λ,u⟩ − h(λ) = margin ≤ 0`.
    SeparatingNormal {
        normal: RationalVec,
        #[serde(serialize_with = "serialize_field")]
        margin: F,
    },
    /// A convex combination of generators whose selected coordinates are at
    /// most the target.
    AttainedWitness {
        coords: Vec<usize>,
        combination: Vec<WeightedGenerator<F>>,
    },
    Unattained(UnattainedProof),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct MembershipVerdict<F: OrderedField = Rational> {
    pub answer: bool,
    pub certificate: Certificate<F>,
    pub iterations: usize,
}

pub(crate) fn combination_point<F: OrderedField>(
    body: &GeneratorFamily,
    combination: &[WeightedGenerator<F>],
) -> Result<Option<Vec<F>>> {
    let mut total = F::zero_val();
    let mut acc = vec![F::zero_val(); body.dim()];
    for wg in combination {
        if wg.weight.is_negative_value() {
            return Ok(None);
        }
        total = total.plus(&wg.weight);
        let g = body.generator(&wg.generator)?;
        for (a, x) in acc.iter_mut().zip(g.iter()) {
            *a = a.plus(&wg.weight.scaled(x));
        }
    }
    if total != F::one_val() {
        return Ok(None);
    }
    Ok(Some(acc))
}

fn dot_lift<F: OrderedField>(lambda: &RationalVec, u: &[F]) -> F {
    lambda
        .iter()
        .zip(u)
        .fold(F::zero_val(), |acc, (l, x)| acc.plus(&x.scaled(l)))
}

impl<F: OrderedField> MembershipVerdict<F> {
    /// Independent re-check of the certificate against `body` and the query
    /// point `u` (for attainment, `u` is the target on the certificate's
    /// coordinates).
    pub fn verify(&self, body: &GeneratorFamily, u: &[F]) -> Result<bool> {
        let ok = match &self.certificate {
            Certificate::InteriorWitness { combination } => {
                if u.len() != body.dim() {
                    return Ok(false);
                }
                match combination_point(body, combination)? {
                    Some(x) => x.iter().zip(u).all(|(a, b)| a < b),
                    None => false,
                }
            }
            Certificate::SeparatingNormal { normal, margin } => {
                if normal.dim() != u.len()
                    || !normal.is_nonnegative()
                    || normal.is_zero()
                    || margin.is_positive_value()
                {
                    return Ok(false);
                }
                let lifted = lift_normal(body, normal, u.len())?;
                let h = body.support(&lifted)?;
                dot_lift(normal, u).minus(&F::from_rational(&h.value)) == *margin
            }
            Certificate::AttainedWitness {
                coords,
                combination,
            } => match combination_point(body, combination)? {
                Some(x) => {
                    coords.len() == u.len()
                        && coords.iter().zip(u).all(|(&i, a)| i < x.len() && x[i] <= *a)
                }
                None => false,
            },
            Certificate::Unattained(proof) => {
                let alpha: Option<Vec<Rational>> = u.iter().map(|x| x.to_rational()).collect();
                match alpha {
                    Some(alpha) => attain::verify_unattained(body, &proof.coords, &alpha, proof)?,
                    None => false,
                }
            }
        };
        Ok(ok && self.answer == self.certificate.implies())
    }
}

impl<F: OrderedField> Certificate<F> {
    fn implies(&self) -> bool {
        matches!(
            self,
            Certificate::InteriorWitness { .. } | Certificate::AttainedWitness { .. }
        )
    }
}

/// A normal on a coordinate subset is padded with zeros when the verdict
/// concerns a projection; otherwise it is used as is.
fn lift_normal(body: &GeneratorFamily, normal: &RationalVec, len: usize) -> Result<RationalVec> {
    if len == body.dim() {
        Ok(normal.clone())
    } else {
        Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: len,
        })
    }
}

/// Tries `λ` as a separating normal for `u`; rescales so that `h(λ) = 1`
/// when the support value is positive.
fn check_normal<F: OrderedField>(
    body: &GeneratorFamily,
    normal: &[F],
    u: &[F],
) -> Result<Option<Certificate<F>>> {
    let Some(lambda) = normal.iter().map(|x| x.to_rational()).collect::<Option<Vec<_>>>() else {
        return Ok(None);
    };
    let mut lambda = RationalVec::new(lambda);
    if !lambda.is_nonnegative() || lambda.is_zero() {
        return Ok(None);
    }
    let mut h = body.support(&lambda)?;
    if h.value > Rational::from_integer(0.into()) {
        let s = h.value.recip();
        lambda = lambda.scale(&s);
        h.value = Rational::from_integer(1.into());
    }
    let margin = dot_lift(&lambda, u).minus(&F::from_rational(&h.value));
    if margin.is_positive_value() {
        return Ok(None);
    }
    Ok(Some(Certificate::SeparatingNormal {
        normal: lambda,
        margin,
    }))
}

pub(crate) fn floor_points(body: &GeneratorFamily, j: u64) -> Vec<RationalVec> {
    let jb = j.into();
    body.tails().iter().map(|t| t.floor_point(&jb)).collect()
}

/// Decides `u ∈ int P` over any ordered field containing the rationals.
pub fn is_interior_in<F: OrderedField>(
    body: &GeneratorFamily,
    u: &[F],
    opts: &SearchOptions,
) -> Result<MembershipVerdict<F>> {
    if u.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: u.len(),
        });
    }
    if u.iter().any(|x| x.is_negative_value()) {
        return Err(Error::InvalidArgument("query point must be nonnegative".into()));
    }
    let mut j: u64 = 1;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let pool = body.truncate_with_refs(j);
        let inner: Vec<Vec<F>> = pool.iter().map(|(v, _)| v.lift()).collect();
        let lp = solve_domination(&inner, u, &[])?;
        let delta = lp
            .delta
            .ok_or_else(|| Error::Internal("unbounded domination LP".into()))?;
        if delta.is_positive_value() {
            let combination = pool
                .iter()
                .zip(&lp.weights)
                .filter(|(_, w)| !w.is_zero_value())
                .map(|((_, g), w)| WeightedGenerator {
                    generator: g.clone(),
                    weight: w.clone(),
                })
                .collect();
            return Ok(MembershipVerdict {
                answer: true,
                certificate: Certificate::InteriorWitness { combination },
                iterations,
            });
        }
        if let Some(cert) = check_normal(body, &lp.normal, u)? {
            return Ok(MembershipVerdict {
                answer: false,
                certificate: cert,
                iterations,
            });
        }
        if body.is_polyhedral() {
            return Err(Error::Internal(
                "dual of a polyhedral domination LP failed to separate".into(),
            ));
        }
        let mut outer = inner;
        outer.extend(floor_points(body, j).iter().map(|v| v.lift()));
        let lp_out = solve_domination(&outer, u, &[])?;
        if !lp_out.delta.as_ref().is_some_and(|d| d.is_positive_value()) {
            if let Some(cert) = check_normal(body, &lp_out.normal, u)? {
                return Ok(MembershipVerdict {
                    answer: false,
                    certificate: cert,
                    iterations,
                });
            }
        }
        j = next_j(body, &lp.normal, j);
        if j > opts.max_j {
            return Err(Error::Undecided {
                what: "interior membership".into(),
                iterations,
            });
        }
    }
}

/// Doubles `j`, jumping further when the inner dual is minimised by a tail
/// term beyond the current truncation.
pub(crate) fn next_j<F: OrderedField>(body: &GeneratorFamily, normal: &[F], j: u64) -> u64 {
    let mut next = j.saturating_mul(2);
    let lambda: Option<Vec<Rational>> = normal.iter().map(|x| x.to_rational()).collect();
    if let Some(lambda) = lambda {
        let lambda = RationalVec::new(lambda);
        if lambda.is_nonnegative() && !lambda.is_zero() {
            for t in body.tails() {
                if let (_, Some(k)) = t.support(&lambda) {
                    if let Ok(k) = u64::try_from(k) {
                        next = next.max(k);
                    }
                }
            }
        }
    }
    next
}

pub fn is_interior(body: &GeneratorFamily, u: &RationalVec) -> Result<MembershipVerdict> {
    is_interior_in(body, u.entries(), &SearchOptions::default())
}

/// `u + ε·1` for an infinitesimal `ε > 0`.
pub fn perturb_up(u: &RationalVec) -> Vec<EpsRational> {
    u.iter()
        .map(|x| EpsRational::linear(x.clone(), Rational::from_integer(1.into())))
        .collect()
}

/// Decides `u ∈ cl P` as `u + ε·1 ∈ int P`.
pub fn is_in_closure_with(
    body: &GeneratorFamily,
    u: &RationalVec,
    opts: &SearchOptions,
) -> Result<MembershipVerdict<EpsRational>> {
    u.check_dim(body.dim())?;
    if !u.is_nonnegative() {
        return Err(Error::InvalidArgument("query point must be nonnegative".into()));
    }
    is_interior_in(body, &perturb_up(u), opts)
}

pub fn is_in_closure(body: &GeneratorFamily, u: &RationalVec) -> Result<MembershipVerdict<EpsRational>> {
    is_in_closure_with(body, u, &SearchOptions::default())
}
