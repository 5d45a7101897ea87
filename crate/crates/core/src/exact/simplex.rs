//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Solves `max c·x  s.t.  A x = b, x ≥ 0` over any [`OrderedField`].
//! Every row carries an artificial column that is never allowed to re-enter
//! once phase one is over, so the final tableau exposes `c_B B⁻¹` as the
//! reduced costs of those columns: that is the dual vector returned with an
//! optimal solution, and (shifted by one) the Farkas vector of an infeasible
//! system.

use super::OrderedField;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct LinearProgram<F> {
    /// Constraint rows, each of length `c.len()`.
    pub a: Vec<Vec<F>>,
    pub b: Vec<F>,
    pub c: Vec<F>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome<F> {
    /// `y` satisfies `Aᵀy ≥ c` and `b·y = value = c·x`.
    Optimal { x: Vec<F>, y: Vec<F>, value: F },
    /// `Aᵀy ≥ 0` and `b·y < 0`.
    Infeasible { farkas: Vec<F> },
    /// Column whose increase is unbounded in the final phase-two tableau.
    Unbounded { column: usize },
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    basis: Vec<usize>,
    reduced: Vec<F>,
    objective: F,
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

impl<F: OrderedField> Tableau<F> {
    fn pivot(&mut self, r: usize, j: usize) -> Result<()> {
        let p = self.rows[r][j].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.over(&p)?;
        }
        self.rhs[r] = self.rhs[r].over(&p)?;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][j].clone();
            if f.is_zero_value() {
                continue;
            }
            for (x, pr) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pr.is_zero_value() {
                    *x = x.minus(&f.times(pr)?);
                }
            }
            self.rhs[i] = self.rhs[i].minus(&f.times(&pivot_rhs)?);
        }
        let f = self.reduced[j].clone();
        if !f.is_zero_value() {
            for (x, pr) in self.reduced.iter_mut().zip(&pivot_row) {
                if !pr.is_zero_value() {
                    *x = x.minus(&f.times(pr)?);
                }
            }
            self.objective = self.objective.minus(&f.times(&pivot_rhs)?);
        }
        self.basis[r] = j;
        Ok(())
    }

    /// Bland's rule over the first `enter_limit` columns.
    fn run(&mut self, enter_limit: usize) -> Result<Phase> {
        loop {
            let Some(j) = (0..enter_limit).find(|&j| self.reduced[j].is_negative_value()) else {
                return Ok(Phase::Optimal);
            };
            let mut best: Option<(usize, F)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if !a.is_positive_value() {
                    continue;
                }
                let ratio = self.rhs[r].over(a)?;
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return Ok(Phase::Unbounded(j)),
                Some((r, _)) => self.pivot(r, j)?,
            }
        }
    }

    fn reset_costs(&mut self, costs: &[F]) -> Result<()> {
        let width = self.reduced.len();
        let mut reduced: Vec<F> = costs.iter().map(|c| c.negated()).collect();
        let mut objective = F::zero_val();
        for (r, &bj) in self.basis.iter().enumerate() {
            let cb = &costs[bj];
            if cb.is_zero_value() {
                continue;
            }
            for j in 0..width {
                let a = &self.rows[r][j];
                if !a.is_zero_value() {
                    reduced[j] = reduced[j].plus(&cb.times(a)?);
                }
            }
            objective = objective.plus(&cb.times(&self.rhs[r])?);
        }
        self.reduced = reduced;
        self.objective = objective;
        Ok(())
    }
}

pub fn solve_lp<F: OrderedField>(lp: &LinearProgram<F>) -> Result<LpOutcome<F>> {
    let m = lp.a.len();
    let n = lp.c.len();
    if lp.b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: lp.b.len(),
        });
    }
    if let Some(row) = lp.a.iter().find(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: row.len(),
        });
    }

    let flipped: Vec<bool> = lp.b.iter().map(|b| b.is_negative_value()).collect();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for r in 0..m {
        let mut row: Vec<F> = Vec::with_capacity(n + m);
        for x in &lp.a[r] {
            row.push(if flipped[r] { x.negated() } else { x.clone() });
        }
        for k in 0..m {
            row.push(if k == r { F::one_val() } else { F::zero_val() });
        }
        rows.push(row);
        rhs.push(if flipped[r] {
            lp.b[r].negated()
        } else {
            lp.b[r].clone()
        });
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        reduced: vec![F::zero_val(); n + m],
        objective: F::zero_val(),
    };
    let unflip = |y: Vec<F>| -> Vec<F> {
        y.into_iter()
            .zip(&flipped)
            .map(|(v, &f)| if f { v.negated() } else { v })
            .collect()
    };

    // Phase one: maximise minus the sum of artificials.
    let mut phase_one_costs = vec![F::zero_val(); n + m];
    for c in phase_one_costs.iter_mut().skip(n) {
        *c = F::one_val().negated();
    }
    t.reset_costs(&phase_one_costs)?;
    match t.run(n + m)? {
        Phase::Optimal => {}
        Phase::Unbounded(_) => {
            return Err(Error::Internal("phase one cannot be unbounded".into()));
        }
    }
    if t.objective.is_negative_value() {
        let farkas = (0..m).map(|r| t.reduced[n + r].minus(&F::one_val())).collect();
        return Ok(LpOutcome::Infeasible {
            farkas: unflip(farkas),
        });
    }

    // Drive zero-level artificials out of the basis where possible.
    for r in 0..m {
        if t.basis[r] < n {
            continue;
        }
        if let Some(j) = (0..n).find(|&j| !t.rows[r][j].is_zero_value()) {
            t.pivot(r, j)?;
        }
    }

    let mut costs = lp.c.clone();
    costs.extend((0..m).map(|_| F::zero_val()));
    t.reset_costs(&costs)?;
    match t.run(n)? {
        Phase::Unbounded(j) => Ok(LpOutcome::Unbounded { column: j }),
        Phase::Optimal => {
            let mut x = vec![F::zero_val(); n];
            for (r, &bj) in t.basis.iter().enumerate() {
                if bj < n {
                    x[bj] = t.rhs[r].clone();
                }
            }
            let y = (0..m).map(|r| t.reduced[n + r].clone()).collect();
            Ok(LpOutcome::Optimal {
                x,
                y: unflip(y),
                value: t.objective.clone(),
            })
        }
    }
}
