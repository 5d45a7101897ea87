//! Attainment: does some point of `P` have `x_I = α` exactly?
//!
//! Since `P` is upward closed this asks for a convex combination of generators
//! whose `I`-coordinates are at most `α`. Under the projection a tail either
//! keeps escaping (its terms become ordinary columns, truncated as in the
//! interior test) or converges. A convergent tail with `r_I ≠ 0` sweeps the
//! half-open segment `(p_I, p_I + r_I]`, modelled by a weight `w` and a
//! segment variable `0 ≤ z ≤ w`, with `z > 0` required whenever `w > 0`. The
//! strict requirement is handled by discarding tails whose `z` is forced to
//! zero, one at a time, each discard backed by an LP dual.

use num_traits::{One, Zero};

use super::{
    floor_points, Certificate, MembershipVerdict, SearchOptions, UnattainedProof,
    WeightedGenerator,
};
use crate::body::{check_coords, GeneratorFamily, GeneratorRef};
use crate::error::{Error, Result};
use crate::exact::{solve_lp, LinearProgram, LpOutcome, Rational, RationalVec};

/// The attainment LP for a fixed truncation and set of active segment tails.
///
/// Columns: generator points | segment weights `w_T` | segment variables
/// `z_T` | coordinate slacks | segment slacks. Rows: one per coordinate in
/// `I`, the normalisation `Σ w = 1`, then `z_T − w_T + σ_T = 0` per segment.
pub struct AttainmentLp {
    points: Vec<(RationalVec, Option<GeneratorRef>)>,
    segments: Vec<usize>,
    lp: LinearProgram<Rational>,
}

fn segment_tails(body: &GeneratorFamily, coords: &[usize]) -> Vec<usize> {
    body.tails()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.q().select(coords).is_zero() && !t.r().select(coords).is_zero())
        .map(|(k, _)| k)
        .collect()
}

impl AttainmentLp {
    pub fn build(
        body: &GeneratorFamily,
        coords: &[usize],
        alpha: &[Rational],
        j_max: u64,
        outer: bool,
        segments: &[usize],
    ) -> AttainmentLp {
        let mut points: Vec<(RationalVec, Option<GeneratorRef>)> = body
            .points()
            .iter()
            .enumerate()
            .map(|(index, p)| (p.select(coords), Some(GeneratorRef::Point { index })))
            .collect();
        for (index, t) in body.tails().iter().enumerate() {
            if !t.q().select(coords).is_zero() {
                for j in 1..=j_max {
                    points.push((
                        t.point_at(j).select(coords),
                        Some(GeneratorRef::Tail {
                            index,
                            j: j.into(),
                        }),
                    ));
                }
            } else if t.r().select(coords).is_zero() {
                points.push((
                    t.p().select(coords),
                    Some(GeneratorRef::Tail {
                        index,
                        j: One::one(),
                    }),
                ));
            }
        }
        if outer {
            for (t, f) in body.tails().iter().zip(floor_points(body, j_max)) {
                if !t.q().select(coords).is_zero() {
                    points.push((f.select(coords), None));
                }
            }
        }

        let k = coords.len();
        let m = points.len();
        let s = segments.len();
        let width = m + 2 * s + k + s;
        let zero = Rational::zero;
        let one = Rational::one;
        let mut a = Vec::with_capacity(k + 1 + s);
        for (row_i, &i) in coords.iter().enumerate() {
            let mut row = vec![zero(); width];
            for (g, (p, _)) in points.iter().enumerate() {
                row[g] = p[row_i].clone();
            }
            for (pos, &t) in segments.iter().enumerate() {
                let tail = &body.tails()[t];
                row[m + pos] = tail.p()[i].clone();
                row[m + s + pos] = tail.r()[i].clone();
            }
            row[m + 2 * s + row_i] = one();
            a.push(row);
        }
        let mut norm = vec![zero(); width];
        for x in norm.iter_mut().take(m + s) {
            *x = one();
        }
        a.push(norm);
        for pos in 0..s {
            let mut row = vec![zero(); width];
            row[m + s + pos] = one();
            row[m + pos] = -one();
            row[m + 2 * s + k + pos] = one();
            a.push(row);
        }
        let mut b: Vec<Rational> = alpha.to_vec();
        b.push(one());
        b.extend((0..s).map(|_| zero()));
        let c = vec![zero(); width];
        AttainmentLp {
            points,
            segments: segments.to_vec(),
            lp: LinearProgram { a, b, c },
        }
    }

    pub fn program(&self) -> &LinearProgram<Rational> {
        &self.lp
    }

    /// Column of the segment variable of tail `t`.
    fn z_column(&self, t: usize) -> usize {
        let pos = self.segments.iter().position(|&x| x == t).expect("active segment");
        self.points.len() + self.segments.len() + pos
    }

    fn with_objective(&self, column: Option<usize>) -> LinearProgram<Rational> {
        let mut lp = self.lp.clone();
        if let Some(col) = column {
            lp.c[col] = Rational::one();
        }
        lp
    }

    /// Turns a feasible solution into a combination of true generators. Only
    /// meaningful for the inner program, where every segment with weight has
    /// a positive segment variable.
    fn witness(&self, x: &[Rational]) -> Result<Vec<WeightedGenerator<Rational>>> {
        let mut out = Vec::new();
        for ((_, g), w) in self.points.iter().zip(x) {
            if w.is_zero() {
                continue;
            }
            let g = g
                .clone()
                .ok_or_else(|| Error::Internal("floor point in an inner witness".into()))?;
            out.push(WeightedGenerator {
                generator: g,
                weight: w.clone(),
            });
        }
        let m = self.points.len();
        let s = self.segments.len();
        for (pos, &index) in self.segments.iter().enumerate() {
            let w = &x[m + pos];
            let z = &x[m + s + pos];
            if w.is_zero() {
                continue;
            }
            if z.is_zero() || z > w {
                return Err(Error::Internal("segment parameter outside (0, 1]".into()));
            }
            // p + t·r with t = z/w lies between β_j and β_{j+1}, j = floor(1/t)
            let t = z / w;
            let j = t.recip().floor().to_integer();
            let jr = Rational::from_integer(j.clone());
            let hi = jr.recip();
            let lo = (&jr + Rational::one()).recip();
            let lam = (&t - &lo) / (&hi - &lo);
            if !lam.is_zero() {
                out.push(WeightedGenerator {
                    generator: GeneratorRef::Tail {
                        index,
                        j: j.clone(),
                    },
                    weight: w * &lam,
                });
            }
            if lam != Rational::one() {
                out.push(WeightedGenerator {
                    generator: GeneratorRef::Tail { index, j: j + 1 },
                    weight: w * (Rational::one() - &lam),
                });
            }
        }
        Ok(out)
    }
}

enum Reduced {
    Feasible {
        lp: AttainmentLp,
        solution: Vec<Rational>,
    },
    Infeasible(UnattainedProof),
}

/// Discards segment tails until every remaining one can carry positive
/// weight, or the program becomes infeasible.
fn reduce(
    body: &GeneratorFamily,
    coords: &[usize],
    alpha: &[Rational],
    j_max: u64,
    outer: bool,
) -> Result<Reduced> {
    let mut active = segment_tails(body, coords);
    let mut excluded = Vec::new();
    'outer: loop {
        let lp = AttainmentLp::build(body, coords, alpha, j_max, outer, &active);
        let base = match solve_lp(&lp.with_objective(None))? {
            LpOutcome::Infeasible { farkas } => {
                return Ok(Reduced::Infeasible(UnattainedProof {
                    coords: coords.to_vec(),
                    j_max,
                    excluded,
                    farkas: RationalVec::new(farkas),
                }))
            }
            LpOutcome::Optimal { x, .. } => x,
            LpOutcome::Unbounded { .. } => {
                return Err(Error::Internal("attainment feasibility LP unbounded".into()))
            }
        };
        let mut sols = Vec::new();
        for &t in &active {
            match solve_lp(&lp.with_objective(Some(lp.z_column(t))))? {
                LpOutcome::Optimal { x, y, value } => {
                    if value.is_zero() {
                        excluded.push((t, RationalVec::new(y)));
                        active.retain(|&x| x != t);
                        continue 'outer;
                    }
                    sols.push(x);
                }
                _ => return Err(Error::Internal("segment LP lost feasibility".into())),
            }
        }
        let solution = if sols.is_empty() {
            base
        } else {
            let n = Rational::from_integer(sols.len().into());
            (0..base.len())
                .map(|c| sols.iter().map(|x| &x[c]).sum::<Rational>() / &n)
                .collect()
        };
        return Ok(Reduced::Feasible { lp, solution });
    }
}

fn check_inputs(body: &GeneratorFamily, coords: &[usize], alpha: &RationalVec) -> Result<()> {
    check_coords(coords, body.dim())?;
    alpha.check_dim(coords.len())?;
    if !alpha.is_nonnegative() {
        return Err(Error::InvalidArgument("target must be nonnegative".into()));
    }
    Ok(())
}

/// Decides whether `{x : x_I = α}` meets `P`. `coords` are 0-based and
/// strictly increasing.
pub fn is_attained(
    body: &GeneratorFamily,
    coords: &[usize],
    alpha: &RationalVec,
    opts: &SearchOptions,
) -> Result<MembershipVerdict> {
    check_inputs(body, coords, alpha)?;
    let escaping = body
        .tails()
        .iter()
        .any(|t| !t.q().select(coords).is_zero());
    let mut j: u64 = 1;
    let mut iterations = 0;
    loop {
        iterations += 1;
        if let Reduced::Feasible { lp, solution } = reduce(body, coords, alpha, j, false)? {
            return Ok(MembershipVerdict {
                answer: true,
                certificate: Certificate::AttainedWitness {
                    coords: coords.to_vec(),
                    combination: lp.witness(&solution)?,
                },
                iterations,
            });
        }
        if let Reduced::Infeasible(proof) = reduce(body, coords, alpha, j, escaping)? {
            return Ok(MembershipVerdict {
                answer: false,
                certificate: Certificate::Unattained(proof),
                iterations,
            });
        }
        j = j.saturating_mul(2);
        if j > opts.max_j {
            return Err(Error::Undecided {
                what: "attainment".into(),
                iterations,
            });
        }
    }
}

fn column_products(lp: &LinearProgram<Rational>, y: &RationalVec) -> Option<Vec<Rational>> {
    if y.dim() != lp.a.len() {
        return None;
    }
    Some(
        (0..lp.c.len())
            .map(|j| lp.a.iter().zip(y.iter()).map(|(row, yi)| &row[j] * yi).sum())
            .collect(),
    )
}

/// Replays the discards and the final Farkas certificate on the outer
/// relaxation at `proof.j_max`.
pub fn verify_unattained(
    body: &GeneratorFamily,
    coords: &[usize],
    alpha: &[Rational],
    proof: &UnattainedProof,
) -> Result<bool> {
    if check_coords(coords, body.dim()).is_err() || alpha.len() != coords.len() {
        return Ok(false);
    }
    let escaping = body
        .tails()
        .iter()
        .any(|t| !t.q().select(coords).is_zero());
    let mut active = segment_tails(body, coords);
    for (t, y) in &proof.excluded {
        if !active.contains(t) {
            return Ok(false);
        }
        let lp = AttainmentLp::build(body, coords, alpha, proof.j_max, escaping, &active);
        let prog = lp.with_objective(Some(lp.z_column(*t)));
        let Some(aty) = column_products(&prog, y) else {
            return Ok(false);
        };
        if aty.iter().zip(&prog.c).any(|(l, c)| l < c) {
            return Ok(false);
        }
        let by: Rational = prog.b.iter().zip(y.iter()).map(|(b, y)| b * y).sum();
        if by > Rational::zero() {
            return Ok(false);
        }
        active.retain(|x| x != t);
    }
    let lp = AttainmentLp::build(body, coords, alpha, proof.j_max, escaping, &active);
    let Some(aty) = column_products(lp.program(), &proof.farkas) else {
        return Ok(false);
    };
    if aty.iter().any(|v| *v < Rational::zero()) {
        return Ok(false);
    }
    let by: Rational = lp
        .program()
        .b
        .iter()
        .zip(proof.farkas.iter())
        .map(|(b, y)| b * y)
        .sum();
    Ok(by < Rational::zero())
}
