//! Floating-point cross-check of the exact gauge.
//!
//! Shares no code with the exact engine beyond generator evaluation: the body
//! is truncated to finitely many points, converted to `f64`, and the scale is
//! found by bisection with a floating-point LP feasibility test.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::body::GeneratorFamily;
use crate::error::{Error, Result};

const MIN_TRUNCATION: u64 = 64;
const MAX_TRUNCATION: u64 = 65_536;

/// Truncation depth used for a query: the boundary point hit along `u` sits
/// at tail index roughly `max u / min u`, so a few times that suffices.
pub fn oracle_truncation(u: &[f64]) -> u64 {
    let lo = u.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = u.iter().cloned().fold(0.0, f64::max);
    let ratio = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    let j = (4.0 * ratio).ceil() + MIN_TRUNCATION as f64;
    if j.is_finite() {
        (j as u64).clamp(MIN_TRUNCATION, MAX_TRUNCATION)
    } else {
        MAX_TRUNCATION
    }
}

/// Is `x` above some convex combination of `points`? Decided by the sign of
/// the optimal margin `δ` in `Σ w g + δ·1 ≤ x`, which is computed far more
/// accurately than the solver's feasibility tolerance.
fn dominates(points: &[Vec<f64>], x: &[f64]) -> bool {
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = points
        .iter()
        .map(|_| problem.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();
    let delta = problem.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    problem.add_constraint(
        vars.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>(),
        ComparisonOp::Eq,
        1.0,
    );
    for (i, xi) in x.iter().enumerate() {
        let mut terms: Vec<_> = vars
            .iter()
            .zip(points)
            .filter(|(_, p)| p[i] != 0.0)
            .map(|(&v, p)| (v, p[i]))
            .collect();
        terms.push((delta, 1.0));
        problem.add_constraint(terms, ComparisonOp::Le, *xi);
    }
    match problem.solve() {
        Ok(sol) => sol.objective() >= 0.0,
        Err(_) => false,
    }
}

/// `max Σ v` subject to `Σ v_g g ≤ u`, `v ≥ 0`: with `v = c·w` this is the
/// gauge in a single solve, though only to the solver's tolerance.
fn direct_gauge(points: &[Vec<f64>], u: &[f64]) -> Result<Option<f64>> {
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = points
        .iter()
        .map(|_| problem.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();
    for (i, ui) in u.iter().enumerate() {
        let terms: Vec<_> = vars
            .iter()
            .zip(points)
            .filter(|(_, p)| p[i] != 0.0)
            .map(|(&v, p)| (v, p[i]))
            .collect();
        problem.add_constraint(terms, ComparisonOp::Le, *ui);
    }
    match problem.solve() {
        Ok(sol) => Ok(Some(sol.objective())),
        Err(minilp::Error::Unbounded) => Err(Error::Unbounded("a generator sits at the origin".into())),
        Err(_) => Ok(None),
    }
}

/// `max{c : u ∈ c·P}` to within `tol`, by bisection.
pub fn oracle_gauge(body: &GeneratorFamily, u: &[f64], tol: f64) -> Result<f64> {
    oracle_gauge_truncated(body, u, tol, oracle_truncation(u))
}

/// As [`oracle_gauge`] over the tail terms `j ≤ truncation`. Dropping terms
/// shrinks the body, so the result never exceeds the true gauge by more than
/// `tol`.
pub fn oracle_gauge_truncated(body: &GeneratorFamily, u: &[f64], tol: f64, truncation: u64) -> Result<f64> {
    if u.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: u.len(),
        });
    }
    if !(tol > 0.0) || u.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::InvalidArgument(
            "oracle needs tol > 0 and a strictly positive point".into(),
        ));
    }
    let points: Vec<Vec<f64>> = body
        .truncate(truncation.max(1))
        .iter()
        .map(|p| p.to_f64())
        .collect();
    let inside = |c: f64| {
        let x: Vec<f64> = u.iter().map(|ui| ui / c).collect();
        dominates(&points, &x)
    };
    // one LP for an estimate, confirmed by a bracket of width `tol`
    if let Some(est) = direct_gauge(&points, u)? {
        let (lo, hi) = (est - 0.5 * tol, est + 0.5 * tol);
        if lo > 0.0 && inside(lo) && !inside(hi) {
            return Ok(est);
        }
    }
    let mut hi = 1.0;
    while inside(hi) {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Unbounded("oracle gauge exceeds 1e12".into()));
        }
    }
    let mut lo = hi / 2.0;
    while lo > 0.0 && !inside(lo) {
        hi = lo;
        lo /= 2.0;
        if lo < 1e-12 {
            return Ok(0.0);
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::hyperbola_body;
    use crate::exact::RationalVec;

    #[test]
    fn oracle_examples() {
        let b = GeneratorFamily::from_points(vec![
            RationalVec::from_ints(&[2, 0]),
            RationalVec::from_ints(&[0, 3]),
        ])
        .unwrap();
        let g = oracle_gauge(&b, &[1.0, 1.0], 1e-9).unwrap();
        assert!((g - 5.0 / 6.0).abs() < 1e-8, "{g}");
        let g = oracle_gauge(&hyperbola_body(), &[2.0, 2.0], 1e-9).unwrap();
        assert!((g - 1.0).abs() < 1e-8, "{g}");
        let b = GeneratorFamily::from_points(vec![RationalVec::from_ints(&[1, 1])]).unwrap();
        let g = oracle_gauge(&b, &[3.0, 7.0], 1e-9).unwrap();
        assert!((g - 3.0).abs() < 1e-8, "{g}");
    }
}
