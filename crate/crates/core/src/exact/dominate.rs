//! Strict componentwise domination by a convex combination.
//!
//! `u` strictly dominates `conv(points)` when some `Σ w_g g < u`. The open
//! condition is turned into the closed LP
//!
//! ```text
//! max δ   s.t.  Σ w_g g + δ·1 ≤ u,  Σ w_g = 1,  w ≥ 0
//! ```
//!
//! which is feasible with `δ > 0` exactly when `u` dominates. Its dual is
//! `min_{λ ∈ Δ} ⟨λ,u⟩ − min_g ⟨λ,g⟩`, so a non-positive optimum comes with a
//! normal `λ ≥ 0, Σλ = 1` satisfying `⟨λ,u⟩ ≤ ⟨λ,g⟩` for every point.

use super::{solve_lp, EpsRational, LinearProgram, LpOutcome, OrderedField};
use crate::error::{Error, Result};

/// Raw optimum of the domination LP, including its dual.
#[derive(Clone, Debug)]
pub struct DominationLp<F> {
    /// Optimal margin `δ*`; `None` when unbounded (only possible with free
    /// directions).
    pub delta: Option<F>,
    pub weights: Vec<F>,
    /// Coefficients of the free directions at the optimum.
    pub direction_coeffs: Vec<F>,
    /// Dual `λ` on the coordinate rows; `λ ≥ 0`, `Σλ = 1`.
    pub normal: Vec<F>,
    /// Dual on the normalisation row; `-offset ≤ min_g ⟨λ,g⟩`.
    pub offset: F,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DominationResult<F> {
    Feasible { weights: Vec<F> },
    Infeasible { normal: Vec<F> },
}

impl<F: OrderedField> DominationResult<F> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, DominationResult::Feasible { .. })
    }

    /// Independent exact re-check of whichever branch was returned.
    pub fn verify(&self, points: &[Vec<F>], u: &[F]) -> Result<bool> {
        match self {
            DominationResult::Feasible { weights } => {
                if weights.len() != points.len() || weights.iter().any(|w| w.is_negative_value()) {
                    return Ok(false);
                }
                let total = weights.iter().fold(F::zero_val(), |acc, w| acc.plus(w));
                if total != F::one_val() {
                    return Ok(false);
                }
                for (i, ui) in u.iter().enumerate() {
                    let mut acc = F::zero_val();
                    for (w, g) in weights.iter().zip(points) {
                        acc = acc.plus(&w.times(&g[i])?);
                    }
                    if acc >= *ui {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            DominationResult::Infeasible { normal } => {
                if normal.iter().any(|l| l.is_negative_value())
                    || normal.iter().all(|l| l.is_zero_value())
                {
                    return Ok(false);
                }
                let lu = dot(normal, u)?;
                for g in points {
                    if lu > dot(normal, g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

fn dot<F: OrderedField>(a: &[F], b: &[F]) -> Result<F> {
    let mut acc = F::zero_val();
    for (x, y) in a.iter().zip(b) {
        acc = acc.plus(&x.times(y)?);
    }
    Ok(acc)
}

fn check_input<F>(points: &[Vec<F>], u: &[F]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    for p in points {
        if p.len() != u.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                got: p.len(),
            });
        }
    }
    Ok(())
}

/// Solves the domination LP, optionally allowing `u` to slide along free
/// directions: `Σ w_g g − Σ t_d d + δ·1 ≤ u` with `t` unrestricted.
pub fn solve_domination<F: OrderedField>(
    points: &[Vec<F>],
    u: &[F],
    directions: &[Vec<F>],
) -> Result<DominationLp<F>> {
    check_input(points, u)?;
    let n = u.len();
    let m = points.len();
    let k = directions.len();
    for d in directions {
        if d.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: d.len(),
            });
        }
    }
    // columns: w (m) | t+ (k) | t- (k) | δ+ | δ- | s (n)
    let width = m + 2 * k + 2 + n;
    let delta_plus = m + 2 * k;
    let mut a = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row = vec![F::zero_val(); width];
        for (g, p) in points.iter().enumerate() {
            row[g] = p[i].clone();
        }
        for (d, dir) in directions.iter().enumerate() {
            row[m + d] = dir[i].negated();
            row[m + k + d] = dir[i].clone();
        }
        row[delta_plus] = F::one_val();
        row[delta_plus + 1] = F::one_val().negated();
        row[delta_plus + 2 + i] = F::one_val();
        a.push(row);
    }
    let mut norm = vec![F::zero_val(); width];
    for x in norm.iter_mut().take(m) {
        *x = F::one_val();
    }
    a.push(norm);
    let mut b: Vec<F> = u.to_vec();
    b.push(F::one_val());
    let mut c = vec![F::zero_val(); width];
    c[delta_plus] = F::one_val();
    c[delta_plus + 1] = F::one_val().negated();

    match solve_lp(&LinearProgram { a, b, c })? {
        LpOutcome::Optimal { x, y, value } => {
            let direction_coeffs = (0..k).map(|d| x[m + d].minus(&x[m + k + d])).collect();
            Ok(DominationLp {
                delta: Some(value),
                weights: x[..m].to_vec(),
                direction_coeffs,
                normal: y[..n].to_vec(),
                offset: y[n].clone(),
            })
        }
        LpOutcome::Unbounded { .. } => Ok(DominationLp {
            delta: None,
            weights: Vec::new(),
            direction_coeffs: Vec::new(),
            normal: Vec::new(),
            offset: F::zero_val(),
        }),
        LpOutcome::Infeasible { .. } => Err(Error::Internal(
            "domination LP is always feasible".into(),
        )),
    }
}

/// Decides whether `u` strictly dominates some convex combination of
/// `points`, returning weights or a separating normal.
pub fn lp_strict_dominate<F: OrderedField>(
    points: &[Vec<F>],
    u: &[F],
) -> Result<DominationResult<F>> {
    let lp = solve_domination(points, u, &[])?;
    let delta = lp
        .delta
        .ok_or_else(|| Error::Internal("unbounded domination LP".into()))?;
    if delta.is_positive_value() {
        Ok(DominationResult::Feasible {
            weights: lp.weights,
        })
    } else {
        Ok(DominationResult::Infeasible { normal: lp.normal })
    }
}

/// [`lp_strict_dominate`] over the infinitesimal extension. Keep the points
/// rational and put `ε` in `u` only; pivots then never divide by an
/// infinitesimal quantity.
pub fn lp_strict_dominate_eps(
    points: &[Vec<EpsRational>],
    u: &[EpsRational],
) -> Result<DominationResult<EpsRational>> {
    lp_strict_dominate(points, u)
}
