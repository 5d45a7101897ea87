//! Command-line front end: argument parsing, reports and exit codes.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use toric_newton::asymptotes::enumerate_asymp_with;
use toric_newton::cluster::{cluster_points_with, is_cluster_point_with, witness_sequence, Spacing};
use toric_newton::exact::{format_rational, parse_rational, OrderedField};
use toric_newton::ideal::{minimal_generators, minimal_generators_auto};
use toric_newton::io::{body_hash, plot_slice, read_body, serialize_body, PlotOptions, Slice};
use toric_newton::jumping::{gauge_with, jumping_numbers_up_to, GaugeValue, GaugeWitness};
use toric_newton::membership::{
    is_attained, is_in_closure_with, is_interior_in, Certificate, MembershipVerdict, SearchOptions,
    WeightedGenerator,
};
use toric_newton::oracle::oracle_gauge;
use toric_newton::{Error, GeneratorFamily, GeneratorRef, Rational, RationalVec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "toric-newton", version, about = "Exact Newton convex bodies of toric psh functions")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Largest tail index a certificate search may reach.
    #[arg(long, default_value_t = 1 << 20, global = true)]
    max_j: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct BodyArg {
    #[arg(long)]
    body: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// `u ∈ int(c·P)`
    Int,
    /// `u ∈ cl(c·P)`
    Cl,
    /// `{x_I = u}` meets `c·P`
    Att,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a body file, printing its canonical form.
    Validate(BodyArg),
    /// Membership of a point in the interior, the closure, or a projection.
    Member {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, value_enum, default_value_t = Kind::Int)]
        kind: Kind,
        /// Scale of the body.
        #[arg(long, default_value = "1")]
        c: String,
        /// 1-based coordinates fixed by `--kind att`, comma separated.
        #[arg(long, value_delimiter = ',')]
        coords: Vec<usize>,
        #[arg(required = true)]
        point: Vec<String>,
    },
    /// Minimal generators of the monomial multiplier ideal.
    Ideal {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long)]
        c: String,
        /// Exponent box; grown automatically when absent.
        #[arg(long = "box")]
        box_bound: Option<u64>,
    },
    /// Exact gauge `max{c : u ∈ c·P}`.
    Gauge {
        #[command(flatten)]
        body: BodyArg,
        /// Also run the floating-point oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(required = true)]
        point: Vec<String>,
    },
    /// Jumping numbers of exponents in a box.
    Jump {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long)]
        max: String,
        #[arg(long, default_value_t = 20)]
        lattice: u64,
        #[arg(long)]
        oracle: bool,
    },
    /// Asymptotic coordinate subspaces with integer offsets.
    Asymp {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, default_value_t = 4)]
        bound: u64,
    },
    /// Cluster points of jumping numbers in (0, max].
    Cluster {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long)]
        max: String,
    },
    /// Lattice points whose jumping numbers climb to a cluster point.
    Witness {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Free coordinates of the k-th candidate are k^degree.
        #[arg(long, default_value_t = 1)]
        degree: u32,
    },
    /// SVG drawing of a 2D body or an axis-aligned slice.
    Plot {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, default_value = "1")]
        c: String,
        /// 1-based horizontal axis.
        #[arg(long, default_value_t = 1)]
        x: usize,
        /// 1-based vertical axis.
        #[arg(long, default_value_t = 2)]
        y: usize,
        /// Fixed coordinates as `i=value`, 1-based.
        #[arg(long = "fix")]
        fix: Vec<String>,
        #[arg(long, default_value_t = 8)]
        lattice: u64,
        /// Write the SVG here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a run printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

struct Report {
    body_hash: Option<String>,
    bounds: Value,
    result: Value,
    text: String,
    undecided: bool,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Undecided { .. } => EXIT_UNDECIDED,
        Error::Parse { .. }
        | Error::InvalidBody(_)
        | Error::EmptyPointSet
        | Error::DimensionMismatch { .. } => EXIT_VALIDATION,
        Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn rational(text: &str, what: &str) -> Result<Rational, Error> {
    parse_rational(text).map_err(|_| Error::InvalidArgument(format!("{what}: not a rational: {text}")))
}

fn vector(items: &[String]) -> Result<RationalVec, Error> {
    items
        .iter()
        .map(|t| rational(t, "point"))
        .collect::<Result<Vec<_>, _>>()
        .map(RationalVec::new)
}

fn zero_based(coords: &[usize]) -> Result<Vec<usize>, Error> {
    coords
        .iter()
        .map(|&i| {
            i.checked_sub(1)
                .ok_or_else(|| Error::InvalidArgument("coordinates are 1-based".into()))
        })
        .collect()
}

fn generator_text(g: &GeneratorRef) -> String {
    match g {
        GeneratorRef::Point { index } => format!("point {}", index + 1),
        GeneratorRef::Tail { index, j } => format!("tail {} j={j}", index + 1),
    }
}

fn combination_text<F: OrderedField>(c: &[WeightedGenerator<F>]) -> String {
    c.iter()
        .map(|w| format!("{} · {}", w.weight, generator_text(&w.generator)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn certificate_text<F: OrderedField>(c: &Certificate<F>) -> String {
    match c {
        Certificate::InteriorWitness { combination } => {
            format!("interior witness: {}", combination_text(combination))
        }
        Certificate::SeparatingNormal { normal, margin } => {
            format!("separating normal {normal}  margin {margin}")
        }
        Certificate::AttainedWitness { combination, .. } => {
            format!("attained by {}", combination_text(combination))
        }
        Certificate::Unattained(p) => format!(
            "unattained: relaxation at j = {} infeasible, {} segment tail(s) excluded",
            p.j_max,
            p.excluded.len()
        ),
    }
}

fn verdict_report<F: OrderedField>(v: &MembershipVerdict<F>) -> (Value, String) {
    let text = format!("{}\ncertificate: {}\n", v.answer, certificate_text(&v.certificate));
    (serde_json::to_value(v).expect("serializable"), text)
}

fn gauge_text(g: &GaugeValue) -> String {
    let witness = match &g.witness {
        GaugeWitness::Facet { normal, support } => format!("facet normal {normal} support {}", format_rational(support)),
        GaugeWitness::Limit { normal, support, subset } => format!(
            "limit normal {normal} support {} coords {:?}",
            format_rational(support),
            subset.iter().map(|i| i + 1).collect::<Vec<_>>()
        ),
    };
    format!("value {}  witness {witness}\n", format_rational(&g.value))
}

fn fmt_exponent(a: &[u64]) -> String {
    format!("({})", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn load(body: &BodyArg) -> Result<(GeneratorFamily, String), Error> {
    let b = read_body(&body.body)?;
    let hash = body_hash(&b);
    Ok((b, hash))
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let opts = SearchOptions { max_j: cli.max_j };
    match &cli.command {
        Command::Validate(body) => {
            let (b, hash) = load(body)?;
            let canonical = serialize_body(&b);
            Ok(Report {
                body_hash: Some(hash),
                bounds: json!({}),
                result: json!({"valid": true, "canonical": canonical, "polyhedral": b.is_polyhedral()}),
                text: format!("valid\n{canonical}"),
                undecided: false,
            })
        }
        Command::Member { body, kind, c, coords, point } => {
            let (b, hash) = load(body)?;
            let c = rational(c, "c")?;
            let scaled = b.scale(&c)?;
            let u = vector(point)?;
            let (result, text) = match kind {
                Kind::Int => verdict_report(&is_interior_in(&scaled, u.entries(), &opts)?),
                Kind::Cl => verdict_report(&is_in_closure_with(&scaled, &u, &opts)?),
                Kind::Att => {
                    let coords = if coords.is_empty() {
                        (0..b.dim()).collect()
                    } else {
                        zero_based(coords)?
                    };
                    verdict_report(&is_attained(&scaled, &coords, &u, &opts)?)
                }
            };
            Ok(Report {
                body_hash: Some(hash),
                bounds: json!({"max_j": opts.max_j}),
                result,
                text,
                undecided: false,
            })
        }
        Command::Ideal { body, c, box_bound } => {
            let (b, hash) = load(body)?;
            let c = rational(c, "c")?;
            let ideal = match box_bound {
                Some(n) => minimal_generators(&b, &c, *n)?,
                None => minimal_generators_auto(&b, &c)?,
            };
            let mut text = String::new();
            for g in &ideal.minimal_generators {
                let _ = writeln!(text, "{}", fmt_exponent(g));
            }
            let _ = writeln!(text, "complete: {}", ideal.complete);
            Ok(Report {
                body_hash: Some(hash),
                bounds: json!({"box": ideal.box_bound}),
                result: serde_json::to_value(&ideal).expect("serializable"),
                text,
                undecided: false,
            })
        }
        Command::Gauge { body, oracle, point } => {
            let (b, hash) = load(body)?;
            let u = vector(point)?;
            let g = gauge_with(&b, &u, &opts)?;
            let mut text = gauge_text(&g);
            let mut result = serde_json::to_value(&g).expect("serializable");
            if *oracle {
                let approx = oracle_gauge(&b, &u.to_f64(), 1e-9)?;
                let _ = writeln!(text, "oracle (float): {approx:.9}");
                result["oracle_float"] = json!(approx);
            }
            Ok(Report {
                body_hash: Some(hash),
                bounds: json!({"max_j": opts.max_j}),
                result,
                text,
                undecided: false,
            })
        }
        Command::Jump { body, max, lattice, oracle } => {
            let (b, hash) = load(body)?;
            let max = rational(max, "max")?;
            let table = jumping_numbers_up_to(&b, &max, *lattice)?;
            let mut text = String::new();
            for e in &table.entries {
                let _ = writeln!(
                    text,
                    "value {}  witness {}  multiplicity {}",
                    format_rational(&e.value),
                    fmt_exponent(&e.witnesses[0]),
                    e.multiplicity
                );
            }
            let _ = writeln!(text, "partial: {}", table.partial);
            let mut result = serde_json::to_value(&table).expect("serializable");
            if *oracle {
                let mut floats = Vec::new();
                for e in &table.entries {
                    let u: Vec<f64> = e.witnesses[0].iter().map(|&a| a as f64 + 1.0).collect();
                    let approx = oracle_gauge(&b, &u, 1e-9)?;
                    let _ = writeln!(text, "oracle (float) {}: {approx:.9}", fmt_exponent(&e.witnesses[0]));
                    floats.push(approx);
                }
                result["oracle_float"] = json!(floats);
            }
            Ok(Report {
                body_hash: Some(hash),
                bounds: json!({"lattice": lattice, "max": format_rational(&max)}),
                result,
                text,
                undecided: false,
            })
        }
        Command::Asymp { body, bound } => {
            let (b, hash) = load(body)?;
            let report = enumerate_asymp_with(&b, *bound, &opts)?;
            let mut text = String::new();
            for level in &report.levels {
                let _ = writeln!(text, "k = {}", level.k);
                for e in &level.asymp_prime {
                    let _ = writeln!(text, "  asymp' {}  attained {}", e.subspace, e.attained);
                }
                for a in level.asymp() {
                    let _ = writeln!(text, "  asymp  {a}");
                }
            }
            Ok(Report {
                body_hash: Some(hash),
                bounds: json!({"offset_bound": bound, "coordinate_caps": report.coordinate_caps}),
                result: serde_json::to_value(&report).expect("serializable"),
                text,
                undecided: false,
            })
        }
        Command::Cluster { body, max } => {
            let (b, hash) = load(body)?;
            let max = rational(max, "max")?;
            let report = cluster_points_with(&b, &max, &opts)?;
            let values: Vec<String> = report.values.iter().map(format_rational).collect();
            let mut text = format!("values: {}\n", values.join(", "));
            for p in &report.progressions {
                let _ = writeln!(
                    text,
                    "progression I={:?} ratio {} step {}: {}",
                    p.coords.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    p.ratio,
                    format_rational(&p.step),
                    p.values.join(", ")
                );
            }
            for w in &report.witnesses {
                let _ = writeln!(text, "witness m={}: {}", format_rational(&w.m), w.subspace);
            }
            if let Some(g) = &report.min_gap {
                let _ = writeln!(text, "min gap: {}", format_rational(&g.0));
            }
            Ok(Report {
                body_hash: Some(hash),
                bounds: json!({"max": format_rational(&max), "offset_caps": report.offset_caps}),
                result: serde_json::to_value(&report).expect("serializable"),
                text,
                undecided: false,
            })
        }
        Command::Witness { body, m, count, degree } => {
            let (b, hash) = load(body)?;
            let m = rational(m, "m")?;
            if *degree == 0 {
                return Err(Error::InvalidArgument("--degree must be at least 1".into()));
            }
            let spacing = Spacing { degree: *degree };
            let point = is_cluster_point_with(&b, &m, &opts)?;
            let seq = witness_sequence(&b, &m, *count, spacing)?;
            let mut text = String::new();
            if let Some(w) = &point.witness {
                let _ = writeln!(text, "subspace {}", w.subspace);
            }
            for t in &seq {
                let _ = writeln!(text, "{}  jumping number {}", fmt_exponent(&t.point), format_rational(&t.gauge.value));
            }
            Ok(Report {
                body_hash: Some(hash),
                bounds: json!({"count": count}),
                result: json!({"cluster": point, "sequence": seq}),
                text,
                undecided: false,
            })
        }
        Command::Plot { body, c, x, y, fix, lattice, out } => {
            let (b, hash) = load(body)?;
            let c = rational(c, "c")?;
            let mut fixed = Vec::new();
            for f in fix {
                let (i, v) = f
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidArgument(format!("--fix expects i=value, got {f}")))?;
                let i: usize = i
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad coordinate in {f}")))?;
                fixed.push((zero_based(&[i])?[0], rational(v.trim(), "fix")?));
            }
            let slice = Slice {
                x_axis: zero_based(&[*x])?[0],
                y_axis: zero_based(&[*y])?[0],
                fixed,
            };
            let svg = plot_slice(&b, &slice, &c, &PlotOptions { lattice: *lattice, ..PlotOptions::default() })?;
            let text = match out {
                Some(path) => {
                    std::fs::write(path, &svg)
                        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
                    format!("wrote {}\n", path.display())
                }
                None => svg.clone(),
            };
            Ok(Report {
                body_hash: Some(hash),
                bounds: json!({"lattice": lattice}),
                result: json!({"svg": svg}),
                text,
                undecided: false,
            })
        }
    }
}

fn render(format: Format, echo: &str, report: &Report) -> String {
    match format {
        Format::Json => {
            let doc = json!({
                "command": echo,
                "body_hash": report.body_hash,
                "bounds": report.bounds,
                "undecided": report.undecided,
                "result": report.result,
            });
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        Format::Text => {
            let mut out = format!("command: {echo}\n");
            if let Some(h) = &report.body_hash {
                let _ = writeln!(out, "body: sha256 {h}");
            }
            out.push_str(&report.text);
            out
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let echo = argv.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match run(&cli) {
        Ok(report) => Outcome {
            stdout: render(cli.format, &echo, &report),
            stderr: String::new(),
            code: EXIT_OK,
        },
        Err(e) => {
            let code = exit_code(&e);
            let stdout = if code == EXIT_UNDECIDED {
                let report = Report {
                    body_hash: None,
                    bounds: json!({"max_j": cli.max_j}),
                    result: json!({"error": e.to_string()}),
                    text: format!("undecided: {e}\n"),
                    undecided: true,
                };
                render(cli.format, &echo, &report)
            } else {
                String::new()
            };
            Outcome {
                stdout,
                stderr: format!("error: {e}\n"),
                code,
            }
        }
    }
}
