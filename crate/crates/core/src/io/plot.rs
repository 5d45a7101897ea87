//! SVG drawings of 2D bodies and axis-aligned 2D slices.
//!
//! The boundary of `c·P` is sampled column by column with a floating-point LP
//! over a truncation, so it is a picture only. Lattice colouring and the
//! dashed asymptote lines come from the exact engine.

use std::fmt::Write as _;

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::body::GeneratorFamily;
use crate::error::{Error, Result};
use crate::exact::{format_rational, solve_lp, LinearProgram, LpOutcome, Rational, RationalVec};
use crate::ideal::contains_monomial;
use crate::membership::{is_attained, SearchOptions};

/// Two free axes; every other coordinate is fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub x_axis: usize,
    pub y_axis: usize,
    pub fixed: Vec<(usize, Rational)>,
}

impl Slice {
    pub fn plane() -> Slice {
        Slice {
            x_axis: 0,
            y_axis: 1,
            fixed: Vec::new(),
        }
    }

    fn check(&self, dim: usize) -> Result<()> {
        let mut seen = vec![false; dim];
        let axes = [self.x_axis, self.y_axis];
        for i in axes.iter().copied().chain(self.fixed.iter().map(|(i, _)| *i)) {
            if i >= dim || seen[i] {
                return Err(Error::InvalidArgument(format!(
                    "slice must name each of the {dim} coordinates exactly once"
                )));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument(format!(
                "slice must name each of the {dim} coordinates exactly once"
            )));
        }
        if self.fixed.iter().any(|(_, v)| v < &Rational::from_integer(0.into())) {
            return Err(Error::InvalidArgument("slice values must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlotOptions {
    /// Lattice exponents `0..=lattice` on each axis.
    pub lattice: u64,
    pub truncation: u64,
    pub columns: usize,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            lattice: 8,
            truncation: 64,
            columns: 240,
        }
    }
}

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

/// Lowest `y` over the truncated slice at abscissa `x`, if the column meets it.
fn lowest_y(points: &[Vec<f64>], slice: &Slice, x: f64) -> Option<f64> {
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let w: Vec<_> = points
        .iter()
        .map(|_| problem.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();
    let y = problem.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    problem.add_constraint(w.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
    let row = |k: usize| -> Vec<_> { w.iter().zip(points).map(|(&v, p)| (v, p[k])).collect() };
    problem.add_constraint(row(slice.x_axis), ComparisonOp::Le, x);
    for (k, value) in &slice.fixed {
        problem.add_constraint(row(*k), ComparisonOp::Le, crate::exact::RationalVec::new(vec![value.clone()]).to_f64()[0]);
    }
    let mut ys = row(slice.y_axis);
    ys.push((y, -1.0));
    problem.add_constraint(ys, ComparisonOp::Le, 0.0);
    problem.solve().ok().map(|s| s.objective())
}

/// Exact smallest value of `axis` on the slice of the closure, from a
/// truncation of the projection onto the axis and the fixed coordinates.
fn axis_floor(body: &GeneratorFamily, slice: &Slice, axis: usize, truncation: u64) -> Result<Option<(Vec<usize>, RationalVec)>> {
    let mut coords: Vec<usize> = slice.fixed.iter().map(|(i, _)| *i).collect();
    coords.push(axis);
    coords.sort();
    let proj = body.project(&coords)?;
    let pts = proj.truncate(truncation);
    let pos = coords.iter().position(|&i| i == axis).expect("axis present");
    let zero = || Rational::from_integer(0.into());
    let fixed_rows: Vec<(usize, Rational)> = coords
        .iter()
        .enumerate()
        .filter(|(_, i)| **i != axis)
        .map(|(k, i)| {
            let v = slice.fixed.iter().find(|(j, _)| j == i).expect("fixed").1.clone();
            (k, v)
        })
        .collect();
    // max −Σ w g_axis  s.t.  Σ w g_k + s_k = v_k,  Σ w = 1
    let width = pts.len() + fixed_rows.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (row_idx, (k, v)) in fixed_rows.iter().enumerate() {
        let mut row: Vec<Rational> = pts.iter().map(|p| p[*k].clone()).collect();
        row.extend((0..fixed_rows.len()).map(|s| if s == row_idx { Rational::from_integer(1.into()) } else { zero() }));
        a.push(row);
        b.push(v.clone());
    }
    let mut norm: Vec<Rational> = vec![Rational::from_integer(1.into()); pts.len()];
    norm.extend((0..fixed_rows.len()).map(|_| zero()));
    a.push(norm);
    b.push(Rational::from_integer(1.into()));
    let mut c: Vec<Rational> = pts.iter().map(|p| -p[pos].clone()).collect();
    c.resize(width, zero());
    match solve_lp(&LinearProgram { a, b, c })? {
        LpOutcome::Optimal { value, .. } => {
            let mut alpha = Vec::with_capacity(coords.len());
            for (k, i) in coords.iter().enumerate() {
                if *i == axis {
                    alpha.push(-value.clone());
                } else {
                    alpha.push(fixed_rows.iter().find(|(j, _)| *j == k).expect("row").1.clone());
                }
            }
            Ok(Some((coords, RationalVec::new(alpha))))
        }
        _ => Ok(None),
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.2}")
}

/// Boundary of `c·P` on the slice, lattice points `α` drawn at `α + 1` and
/// filled when `z^α ∈ J(cφ)`, and dashed lines along unattained axis floors.
pub fn plot_slice(body: &GeneratorFamily, slice: &Slice, c: &Rational, opts: &PlotOptions) -> Result<String> {
    slice.check(body.dim())?;
    let scaled = body.scale(c)?;
    let extent = (opts.lattice + 2) as f64;
    let px = |x: f64| MARGIN + x / extent * SIZE;
    let py = |y: f64| MARGIN + SIZE - y / extent * SIZE;

    let points: Vec<Vec<f64>> = scaled.truncate(opts.truncation).iter().map(|p| p.to_f64()).collect();
    let mut boundary = Vec::new();
    for k in 0..=opts.columns {
        let x = extent * k as f64 / opts.columns as f64;
        if let Some(y) = lowest_y(&points, slice, x) {
            boundary.push((x, y.clamp(0.0, extent)));
        }
    }

    let mut asymptotes = Vec::new();
    for (axis, vertical) in [(slice.x_axis, true), (slice.y_axis, false)] {
        if let Some((coords, alpha)) = axis_floor(&scaled, slice, axis, opts.truncation)? {
            if !is_attained(&scaled, &coords, &alpha, &SearchOptions::default())?.answer {
                let pos = coords.iter().position(|&i| i == axis).expect("axis present");
                asymptotes.push((vertical, alpha[pos].clone()));
            }
        }
    }

    let mut lattice = Vec::new();
    let fixed_exponents: Option<Vec<(usize, u64)>> = slice
        .fixed
        .iter()
        .map(|(i, v)| {
            let e = v - Rational::from_integer(1.into());
            (e.is_integer() && e >= Rational::from_integer(0.into()))
                .then(|| (*i, e.to_integer().try_into().unwrap_or(0)))
        })
        .collect();
    if let Some(fixed) = fixed_exponents {
        for a in 0..=opts.lattice {
            for b in 0..=opts.lattice {
                let mut alpha = vec![0u64; body.dim()];
                alpha[slice.x_axis] = a;
                alpha[slice.y_axis] = b;
                for (i, e) in &fixed {
                    alpha[*i] = *e;
                }
                lattice.push((a + 1, b + 1, contains_monomial(body, c, &alpha)?));
            }
        }
    }

    let total = SIZE + 2.0 * MARGIN;
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        fmt(total)
    );
    let mut title = format!("c = {}, J = {}, axes x{} x{}", format_rational(c), opts.truncation, slice.x_axis + 1, slice.y_axis + 1);
    for (i, v) in &slice.fixed {
        let _ = write!(title, ", x{} = {}", i + 1, format_rational(v));
    }
    let _ = writeln!(svg, r#"<title>{title}</title>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{m}" y="{m}" width="{s}" height="{s}" fill="none" stroke="black"/>"#,
        m = fmt(MARGIN),
        s = fmt(SIZE)
    );
    if !boundary.is_empty() {
        let mut pts: Vec<String> = Vec::new();
        let (x0, _) = boundary[0];
        pts.push(format!("{},{}", fmt(px(x0)), fmt(py(extent))));
        pts.extend(boundary.iter().map(|(x, y)| format!("{},{}", fmt(px(*x)), fmt(py(*y)))));
        let _ = writeln!(
            svg,
            r#"<polyline class="boundary" points="{}" fill="none" stroke="navy" stroke-width="2"/>"#,
            pts.join(" ")
        );
    }
    for (vertical, v) in &asymptotes {
        let t = crate::exact::RationalVec::new(vec![v.clone()]).to_f64()[0];
        let (x1, y1, x2, y2) = if *vertical {
            (px(t), py(0.0), px(t), py(extent))
        } else {
            (px(0.0), py(t), px(extent), py(t))
        };
        let _ = writeln!(
            svg,
            r#"<line class="asymptote" x1="{}" y1="{}" x2="{}" y2="{}" stroke="crimson" stroke-dasharray="6,4"/><!-- {} = {} -->"#,
            fmt(x1),
            fmt(y1),
            fmt(x2),
            fmt(y2),
            if *vertical { "x" } else { "y" },
            format_rational(v)
        );
    }
    for (a, b, inside) in &lattice {
        let _ = writeln!(
            svg,
            r#"<circle class="{}" cx="{}" cy="{}" r="4" fill="{}" stroke="black"/>"#,
            if *inside { "in-ideal" } else { "outside" },
            fmt(px(*a as f64)),
            fmt(py(*b as f64)),
            if *inside { "seagreen" } else { "white" }
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12">x{}</text><text x="{}" y="{}" font-size="12">x{}</text>"#,
        fmt(MARGIN + SIZE - 20.0),
        fmt(MARGIN + SIZE + 20.0),
        slice.x_axis + 1,
        fmt(MARGIN - 30.0),
        fmt(MARGIN + 12.0),
        slice.y_axis + 1
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}
