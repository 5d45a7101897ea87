//! Body files.
//!
//! ```text
//! # comments and blank lines are ignored
//! dim 2
//! point 2 0
//! tail p 1 1  q 0 1  r 1 0
//! ```

mod plot;

pub use plot::{plot_slice, PlotOptions, Slice};

use sha2::{Digest, Sha256};

use crate::body::{GeneratorFamily, TailSequence};
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, RationalVec};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

fn parse_values(line: usize, toks: &[(usize, &str)]) -> Result<RationalVec> {
    toks.iter()
        .map(|(col, t)| {
            parse_rational(t).map_err(|_| parse_error(line, *col, format!("not a rational: {t}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(RationalVec::new)
}

fn parse_tail(line: usize, toks: &[(usize, &str)], dim: usize) -> Result<TailSequence> {
    let mut parts: [Option<RationalVec>; 3] = [None, None, None];
    let mut rest = toks;
    let end_col = toks.last().map_or(1, |(c, t)| c + t.chars().count());
    while let Some(((col, key), tail)) = rest.split_first() {
        let slot = match *key {
            "p" => 0,
            "q" => 1,
            "r" => 2,
            _ => return Err(parse_error(line, *col, format!("expected p, q or r, found {key}"))),
        };
        if parts[slot].is_some() {
            return Err(parse_error(line, *col, format!("{key} given twice")));
        }
        if tail.len() < dim {
            let at = tail.last().map_or(col + 1, |(c, _)| *c);
            return Err(parse_error(line, at, format!("{key} needs {dim} values")));
        }
        parts[slot] = Some(parse_values(line, &tail[..dim])?);
        rest = &tail[dim..];
    }
    let [Some(p), Some(q), Some(r)] = parts else {
        return Err(parse_error(line, end_col, "tail needs p, q and r"));
    };
    TailSequence::new(p, q, r).map_err(|e| parse_error(line, 1, e.to_string()))
}

pub fn parse_body(text: &str) -> Result<GeneratorFamily> {
    let mut dim: Option<usize> = None;
    let mut points = Vec::new();
    let mut tails = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(raw);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        if keyword.starts_with('#') {
            continue;
        }
        let args = &toks[1..];
        match (keyword, dim) {
            ("dim", None) => {
                let [(c, value)] = args else {
                    return Err(parse_error(line, col, "dim takes one value"));
                };
                match value.parse::<usize>() {
                    Ok(n) if n > 0 => dim = Some(n),
                    _ => return Err(parse_error(line, *c, format!("bad dimension {value}"))),
                }
            }
            ("dim", Some(_)) => return Err(parse_error(line, col, "dim given twice")),
            (_, None) => return Err(parse_error(line, col, "body must start with dim")),
            ("point", Some(n)) => {
                if args.len() != n {
                    return Err(parse_error(
                        line,
                        col,
                        format!("point arity {} ≠ dim {n}", args.len()),
                    ));
                }
                let p = parse_values(line, args)?;
                if !p.is_nonnegative() {
                    return Err(parse_error(line, col, "point coordinates must be nonnegative"));
                }
                points.push(p);
            }
            ("tail", Some(n)) => tails.push(parse_tail(line, args, n)?),
            (other, Some(_)) => {
                return Err(parse_error(line, col, format!("unknown keyword {other}")))
            }
        }
    }
    let Some(n) = dim else {
        return Err(parse_error(1, 1, "missing dim line"));
    };
    GeneratorFamily::new(n, points, tails)
}

fn join(v: &RationalVec) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

/// Canonical text: `dim`, then points, then tails, single spaces.
pub fn serialize_body(body: &GeneratorFamily) -> String {
    let mut out = format!("dim {}\n", body.dim());
    for p in body.points() {
        out.push_str(&format!("point {}\n", join(p)));
    }
    for t in body.tails() {
        out.push_str(&format!(
            "tail p {}  q {}  r {}\n",
            join(t.p()),
            join(t.q()),
            join(t.r())
        ));
    }
    out
}

/// SHA-256 of the canonical text, hex encoded.
pub fn body_hash(body: &GeneratorFamily) -> String {
    Sha256::digest(serialize_body(body).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn read_body(path: &std::path::Path) -> Result<GeneratorFamily> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    parse_body(&text)
}
