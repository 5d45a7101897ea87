//! Asymptotic coordinate subspaces.
//!
//! `A = {x_I = a}` is asymptotic to `P` when it misses `int P` but comes
//! arbitrarily close to `P`. Because `P` is upward closed, both conditions
//! only see the fixed coordinates: `A` meets `int P` iff `a` is interior to the
//! projection `π_I(P)`, and `d(A, P) = 0` iff `a` lies in its closure. So `A`
//! is asymptotic exactly when `a` is a boundary point of `cl π_I(P)`.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::body::{check_coords, GeneratorFamily};
use crate::error::{Error, Result};
use crate::exact::{
    ceil_to_int, format_rational, is_positive_integer, solve_domination, solve_lp, EpsRational,
    LinearProgram, LpOutcome, OrderedField, Rational, RationalVec,
};
use crate::membership::{
    floor_points, is_attained, is_in_closure_with, is_interior_in, MembershipVerdict,
    SearchOptions,
};

/// `{x : x_i = a_i for i ∈ I}` with `I` a nonempty proper coordinate subset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoordinateSubspace {
    dim: usize,
    coords: Vec<usize>,
    offsets: RationalVec,
}

impl CoordinateSubspace {
    /// `coords` are 0-based and strictly increasing.
    pub fn new(dim: usize, coords: Vec<usize>, offsets: RationalVec) -> Result<Self> {
        check_coords(&coords, dim)?;
        if coords.len() == dim {
            return Err(Error::InvalidArgument(
                "a subspace must leave at least one coordinate free".into(),
            ));
        }
        offsets.check_dim(coords.len())?;
        Ok(CoordinateSubspace {
            dim,
            coords,
            offsets,
        })
    }

    /// Ambient dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// `k = n − |I|`.
    pub fn dimension(&self) -> usize {
        self.dim - self.coords.len()
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn offsets(&self) -> &RationalVec {
        &self.offsets
    }

    /// `self ⊆ other`: every equation of `other` is one of ours.
    pub fn is_contained_in(&self, other: &CoordinateSubspace) -> bool {
        other.coords.iter().zip(other.offsets.iter()).all(|(i, a)| {
            self.coords
                .iter()
                .position(|j| j == i)
                .is_some_and(|pos| self.offsets[pos] == *a)
        })
    }

    pub fn scale(&self, m: &Rational) -> CoordinateSubspace {
        CoordinateSubspace {
            dim: self.dim,
            coords: self.coords.clone(),
            offsets: self.offsets.scale(m),
        }
    }

    pub fn has_positive_integer_offsets(&self) -> bool {
        self.offsets.iter().all(is_positive_integer)
    }
}

impl fmt::Display for CoordinateSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (i, a)) in self.coords.iter().zip(self.offsets.iter()).enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "x{}={}", i + 1, format_rational(a))?;
        }
        write!(f, "}}")
    }
}

impl Serialize for CoordinateSubspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            dimension: usize,
            fixed: Vec<usize>,
            offsets: &'a RationalVec,
            text: String,
        }
        Repr {
            dimension: self.dimension(),
            fixed: self.coords.iter().map(|i| i + 1).collect(),
            offsets: &self.offsets,
            text: self.to_string(),
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsymptoticVerdict {
    pub asymptotic: bool,
    /// Closure test of the offsets in the projected body.
    pub closure: MembershipVerdict<EpsRational>,
    /// Interior test of the offsets in the projected body; absent when the
    /// closure test already failed.
    pub interior: Option<MembershipVerdict>,
}

fn check_subspace(body: &GeneratorFamily, a: &CoordinateSubspace) -> Result<()> {
    if a.dim != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: a.dim,
        });
    }
    if !a.offsets.is_nonnegative() {
        return Err(Error::InvalidArgument(format!(
            "offsets of {a} must be nonnegative"
        )));
    }
    Ok(())
}

fn asymptotic_in_projection(
    proj: &GeneratorFamily,
    offsets: &RationalVec,
    opts: &SearchOptions,
) -> Result<AsymptoticVerdict> {
    let closure = is_in_closure_with(proj, offsets, opts)?;
    if !closure.answer {
        return Ok(AsymptoticVerdict {
            asymptotic: false,
            closure,
            interior: None,
        });
    }
    let interior = is_interior_in(proj, offsets.entries(), opts)?;
    Ok(AsymptoticVerdict {
        asymptotic: !interior.answer,
        closure,
        interior: Some(interior),
    })
}

pub fn is_asymptotic_with(
    body: &GeneratorFamily,
    a: &CoordinateSubspace,
    opts: &SearchOptions,
) -> Result<AsymptoticVerdict> {
    check_subspace(body, a)?;
    asymptotic_in_projection(&body.project(&a.coords)?, &a.offsets, opts)
}

pub fn is_asymptotic(body: &GeneratorFamily, a: &CoordinateSubspace) -> Result<AsymptoticVerdict> {
    is_asymptotic_with(body, a, &SearchOptions::default())
}

/// Asymptotic with positive integer offsets.
pub fn satisfies_star(body: &GeneratorFamily, a: &CoordinateSubspace) -> Result<bool> {
    if !a.has_positive_integer_offsets() {
        return Ok(false);
    }
    Ok(is_asymptotic(body, a)?.asymptotic)
}

/// `base + span(directions)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub base: RationalVec,
    pub directions: Vec<RationalVec>,
}

impl AffineSubspace {
    pub fn new(base: RationalVec, directions: Vec<RationalVec>) -> Result<Self> {
        for d in &directions {
            d.check_dim(base.dim())?;
        }
        Ok(AffineSubspace { base, directions })
    }

    pub fn from_coordinate(a: &CoordinateSubspace) -> AffineSubspace {
        let mut base = vec![Rational::from_integer(1.into()); a.dim];
        for (i, x) in a.coords.iter().zip(a.offsets.iter()) {
            base[*i] = x.clone();
        }
        let directions = (0..a.dim)
            .filter(|i| !a.coords.contains(i))
            .map(|i| {
                let mut e = vec![Rational::from_integer(0.into()); a.dim];
                e[i] = Rational::from_integer(1.into());
                RationalVec::new(e)
            })
            .collect();
        AffineSubspace {
            base: RationalVec::new(base),
            directions,
        }
    }

    /// Coordinates that no direction moves.
    pub fn constant_coords(&self) -> Vec<usize> {
        (0..self.base.dim())
            .filter(|&i| self.directions.iter().all(|d| d[i] == Rational::from_integer(0.into())))
            .collect()
    }

    /// Whether the span of the directions holds a vector positive on every
    /// non-constant coordinate, so that the subspace reaches arbitrarily high
    /// in all of them.
    pub fn is_upward(&self) -> Result<bool> {
        let constant = self.constant_coords();
        let free: Vec<usize> = (0..self.base.dim()).filter(|i| !constant.contains(i)).collect();
        if free.is_empty() {
            return Ok(true);
        }
        // Σ (t⁺ − t⁻)_d d_i − s_i = 1 for free i, all variables ≥ 0
        let k = self.directions.len();
        let width = 2 * k + free.len();
        let zero = || Rational::from_integer(0.into());
        let mut a = Vec::new();
        for (row_i, &i) in free.iter().enumerate() {
            let mut row = vec![zero(); width];
            for (d, dir) in self.directions.iter().enumerate() {
                row[d] = dir[i].clone();
                row[k + d] = -dir[i].clone();
            }
            row[2 * k + row_i] = -Rational::from_integer(1.into());
            a.push(row);
        }
        let lp = LinearProgram {
            a,
            b: vec![Rational::from_integer(1.into()); free.len()],
            c: vec![zero(); width],
        };
        Ok(matches!(solve_lp(&lp)?, LpOutcome::Optimal { .. }))
    }

    /// The coordinate subspace fixing exactly the constant coordinates.
    pub fn constant_closure(&self) -> Result<CoordinateSubspace> {
        let c = self.constant_coords();
        if c.is_empty() {
            return Err(Error::InvalidArgument(
                "no coordinate is constant on the subspace".into(),
            ));
        }
        CoordinateSubspace::new(self.base.dim(), c.clone(), self.base.select(&c))
    }
}

/// Whether `A` meets `int P`, decided directly: some convex combination of
/// generators is strictly below a point of `A`.
pub fn meets_interior(
    body: &GeneratorFamily,
    a: &AffineSubspace,
    opts: &SearchOptions,
) -> Result<bool> {
    a.base.check_dim(body.dim())?;
    let base: Vec<Rational> = a.base.entries().to_vec();
    let dirs: Vec<Vec<Rational>> = a.directions.iter().map(|d| d.entries().to_vec()).collect();
    let mut j: u64 = 1;
    loop {
        let inner: Vec<Vec<Rational>> = body.truncate(j).iter().map(|v| v.entries().to_vec()).collect();
        let lp = solve_domination(&inner, &base, &dirs)?;
        match &lp.delta {
            None => return Ok(true),
            Some(d) if d.is_positive_value() => return Ok(true),
            _ => {}
        }
        if separates_subspace(body, &lp.normal, &a.base, &a.directions)? {
            return Ok(false);
        }
        let mut outer = inner;
        outer.extend(floor_points(body, j).iter().map(|v| v.entries().to_vec()));
        let lp_out = solve_domination(&outer, &base, &dirs)?;
        if lp_out.delta.as_ref().is_some_and(|d| !d.is_positive_value())
            && separates_subspace(body, &lp_out.normal, &a.base, &a.directions)?
        {
            return Ok(false);
        }
        if body.is_polyhedral() {
            return Err(Error::Internal(
                "polyhedral subspace test failed to separate".into(),
            ));
        }
        j = crate::membership::next_j(body, &lp.normal, j);
        if j > opts.max_j {
            return Err(Error::Undecided {
                what: "subspace meets interior".into(),
                iterations: j.trailing_zeros() as usize,
            });
        }
    }
}

/// `λ ≥ 0`, `λ ≠ 0`, orthogonal to every direction, with
/// `⟨λ, base⟩ ≤ h(λ)`: then `⟨λ, x⟩ = ⟨λ, base⟩ ≤ h(λ)` on all of `A`.
fn separates_subspace(
    body: &GeneratorFamily,
    normal: &[Rational],
    base: &RationalVec,
    directions: &[RationalVec],
) -> Result<bool> {
    let lambda = RationalVec::new(normal.to_vec());
    if lambda.dim() != base.dim() || !lambda.is_nonnegative() || lambda.is_zero() {
        return Ok(false);
    }
    if directions.iter().any(|d| lambda.dot(d) != Rational::from_integer(0.into())) {
        return Ok(false);
    }
    Ok(lambda.dot(base) <= body.support(&lambda)?.value)
}

/// Asymptoticity of an upward affine subspace: the interior condition is
/// checked directly, the distance condition on its constant coordinates.
pub fn is_asymptotic_affine(
    body: &GeneratorFamily,
    a: &AffineSubspace,
    opts: &SearchOptions,
) -> Result<bool> {
    if !a.is_upward()? {
        return Err(Error::InvalidArgument(
            "distance test needs a subspace reaching upward in its free coordinates".into(),
        ));
    }
    if !a.base.is_nonnegative() && a.constant_coords().iter().any(|&i| a.base[i] < Rational::from_integer(0.into())) {
        return Ok(false);
    }
    if meets_interior(body, a, opts)? {
        return Ok(false);
    }
    let closure = a.constant_closure()?;
    let proj = body.project(closure.coords())?;
    Ok(is_in_closure_with(&proj, closure.offsets(), opts)?.answer)
}

/// For `A` asymptotic and upward, the subspace fixing exactly the
/// coordinates constant on `A`, re-verified to be asymptotic.
pub fn largest_asymp_closure(
    body: &GeneratorFamily,
    a: &AffineSubspace,
    opts: &SearchOptions,
) -> Result<CoordinateSubspace> {
    if !is_asymptotic_affine(body, a, opts)? {
        return Err(Error::InvalidArgument("subspace is not asymptotic".into()));
    }
    let closure = a.constant_closure()?;
    if closure.coords().len() == body.dim() {
        return Err(Error::InvalidArgument(
            "every coordinate is constant: the subspace is a point".into(),
        ));
    }
    if !is_asymptotic_with(body, &closure, opts)?.asymptotic {
        return Err(Error::Internal(format!(
            "{closure} is not asymptotic although it closes an asymptotic subspace"
        )));
    }
    Ok(closure)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsympEntry {
    pub subspace: CoordinateSubspace,
    /// `A ∩ P ≠ ∅`.
    pub attained: bool,
    /// Survives the maximality filter.
    pub maximal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsympLevel {
    /// Dimension `k` of the subspaces.
    pub k: usize,
    /// `Asymp′_k`: all (⋆)-subspaces found.
    pub asymp_prime: Vec<AsympEntry>,
}

impl AsympLevel {
    /// `Asymp_k`.
    pub fn asymp(&self) -> Vec<&CoordinateSubspace> {
        self.asymp_prime
            .iter()
            .filter(|e| e.maximal)
            .map(|e| &e.subspace)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsympReport {
    pub dim: usize,
    pub offset_bound: u64,
    /// Per-coordinate offset caps actually used: `min(bound, ceil(max
    /// coordinate of points and first tail terms))`.
    pub coordinate_caps: Vec<u64>,
    /// Levels from `k = n − 1` down to `1`.
    pub levels: Vec<AsympLevel>,
}

impl AsympReport {
    pub fn level(&self, k: usize) -> Option<&AsympLevel> {
        self.levels.iter().find(|l| l.k == k)
    }

    pub fn find(&self, a: &CoordinateSubspace) -> Option<&AsympEntry> {
        self.levels
            .iter()
            .flat_map(|l| &l.asymp_prime)
            .find(|e| e.subspace == *a)
    }
}

/// Marks members of `Asymp′` maximal when no maximal member of higher
/// dimension contains them, working from the top dimension down.
pub fn maximality_filter(levels: &mut [AsympLevel]) {
    levels.sort_by(|a, b| b.k.cmp(&a.k));
    let mut kept: Vec<CoordinateSubspace> = Vec::new();
    for level in levels.iter_mut() {
        for e in level.asymp_prime.iter_mut() {
            e.maximal = !kept.iter().any(|big| e.subspace.is_contained_in(big));
        }
        kept.extend(level.asymp().into_iter().cloned());
    }
}

fn offset_grid(caps: &[u64]) -> Vec<Vec<u64>> {
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

/// `Asymp′_k` and `Asymp_k` for integer offsets in `[1, bound]`, capped per
/// coordinate by the generator data.
pub fn enumerate_asymp(body: &GeneratorFamily, offset_bound: u64) -> Result<AsympReport> {
    enumerate_asymp_with(body, offset_bound, &SearchOptions::default())
}

pub fn enumerate_asymp_with(
    body: &GeneratorFamily,
    offset_bound: u64,
    opts: &SearchOptions,
) -> Result<AsympReport> {
    if offset_bound == 0 {
        return Err(Error::InvalidArgument("offset bound must be at least 1".into()));
    }
    let n = body.dim();
    let caps: Vec<u64> = body
        .coordinate_bounds()
        .iter()
        .map(|b| {
            let c = ceil_to_int(b);
            u64::try_from(c).unwrap_or(u64::MAX).min(offset_bound)
        })
        .collect();
    let mut candidates = Vec::new();
    for mask in 1u32..(1 << n) - 1 {
        let coords: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub_caps: Vec<u64> = coords.iter().map(|&i| caps[i]).collect();
        for offs in offset_grid(&sub_caps) {
            let offsets = RationalVec::new(
                offs.iter().map(|&a| Rational::from_integer(a.into())).collect(),
            );
            candidates.push(CoordinateSubspace::new(n, coords.clone(), offsets)?);
        }
    }
    let found: Vec<Option<AsympEntry>> = candidates
        .par_iter()
        .map(|a| {
            if !is_asymptotic_with(body, a, opts)?.asymptotic {
                return Ok(None);
            }
            let attained = is_attained(body, a.coords(), a.offsets(), opts)?.answer;
            Ok(Some(AsympEntry {
                subspace: a.clone(),
                attained,
                maximal: false,
            }))
        })
        .collect::<Result<_>>()?;
    let mut levels: Vec<AsympLevel> = (1..n)
        .rev()
        .map(|k| AsympLevel {
            k,
            asymp_prime: Vec::new(),
        })
        .collect();
    for e in found.into_iter().flatten() {
        let k = e.subspace.dimension();
        levels
            .iter_mut()
            .find(|l| l.k == k)
            .expect("level exists")
            .asymp_prime
            .push(e);
    }
    for l in levels.iter_mut() {
        l.asymp_prime.sort_by(|a, b| a.subspace.cmp(&b.subspace));
    }
    maximality_filter(&mut levels);
    Ok(AsympReport {
        dim: n,
        offset_bound,
        coordinate_caps: caps,
        levels,
    })
}
