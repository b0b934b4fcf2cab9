//! `sl2geo`: evaluate geodesics, distances and cut times of the sub-Riemannian
//! SL(2) and run the self-check suites.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on numerical or search
//! failures (including failed verify checks).

mod output;

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use sl2_geodesics::cut_locus::{conjugate_points, cut_curve, ConjugateKind};
use sl2_geodesics::log_map::{sr_log_with, LogOptions, MATCH_TOL};
use sl2_geodesics::verify::{self, Suite};
use sl2_geodesics::{cut_time, geodesic_point, mat_exp, AlgebraVector, GeodesicParams, GroupElement, Sl2Error};

use output::{matrix_fields, render_json, Field, Format, Table, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "sl2geo", version, about = "Sub-Riemannian geodesics on SL(2)")]
struct Cli {
    #[arg(long, value_enum, default_value_t = FormatArg::Csv, global = true)]
    format: FormatArg,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// exp(c1·p1 + c2·p2 + c3·k).
    #[command(allow_negative_numbers = true)]
    Exp { c1: f64, c2: f64, c3: f64 },

    /// Points γ(β, φ; t) of a geodesic from e.
    #[command(allow_negative_numbers = true)]
    Geodesic {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        phi: f64,
        /// One or more times, repeated or comma-separated.
        #[arg(long, required = true, value_delimiter = ',', num_args = 1.., allow_hyphen_values = true)]
        t: Vec<f64>,
    },

    /// Cut time T(|β|) with its regime.
    #[command(allow_negative_numbers = true)]
    CutTime {
        #[arg(long, required = true, value_delimiter = ',', num_args = 1.., allow_hyphen_values = true)]
        beta: Vec<f64>,
    },

    /// T(|β|) tabulated on an even grid.
    #[command(allow_negative_numbers = true)]
    CutCurve {
        #[arg(long)]
        beta_min: f64,
        #[arg(long)]
        beta_max: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Also emit rows at 1, 3/(2√2) and 2/√3 when inside the range.
        #[arg(long)]
        landmarks: bool,
    },

    /// Minimizing geodesics from e to the matrix [[g11, g12], [g21, g22]].
    #[command(allow_negative_numbers = true)]
    Log { g11: f64, g12: f64, g21: f64, g22: f64 },

    /// Sub-Riemannian distance from e.
    #[command(allow_negative_numbers = true)]
    Distance { g11: f64, g12: f64, g21: f64, g22: f64 },

    /// Conjugate times in (0, t_max] of geodesics with parameter β.
    #[command(allow_negative_numbers = true)]
    Conjugate {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        t_max: f64,
    },

    /// Run a self-check suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = std::iter::once(Suite::All).chain(Suite::EACH).map(|s| s.name()).collect();
        format!("unknown suite '{s}'; expected one of: {}", names.join(", "))
    })
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Sl2Error> for Failure {
    fn from(e: Sl2Error) -> Self {
        match e {
            Sl2Error::NotUnimodular { .. }
            | Sl2Error::NotTraceless { .. }
            | Sl2Error::NonFinite(_)
            | Sl2Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            Sl2Error::UndeterminedDirection { .. }
            | Sl2Error::NoSignChange { .. }
            | Sl2Error::SearchFailure { .. } => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<output::DetCheckFailed> for Failure {
    fn from(e: output::DetCheckFailed) -> Self {
        Failure::Numerical(format!("emitted matrix failed the det = 1 check (det = {})", e.det))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn match_tol() -> Result<f64, Failure> {
    match std::env::var("SL2_TOL") {
        Err(_) => Ok(MATCH_TOL),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
            _ => Err(Failure::Usage(format!("SL2_TOL must be a positive number, got '{s}'"))),
        },
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let format = match cli.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let table = match &cli.command {
        Command::Exp { c1, c2, c3 } => {
            let x = AlgebraVector::new(*c1, *c2, *c3);
            if !x.to_array().iter().all(|v| v.is_finite()) {
                return Err(Sl2Error::NonFinite("c1/c2/c3").into());
            }
            let g = mat_exp(&x);
            let mut t = Table::new("exp", &["c1", "c2", "c3", "g11", "g12", "g21", "g22", "det"]);
            let mut row: Vec<Field> = vec![(*c1).into(), (*c2).into(), (*c3).into()];
            row.extend(matrix_fields(&g)?);
            row.push(g.det().into());
            t.push(row);
            t
        }
        Command::Geodesic { beta, phi, t: times } => {
            if !beta.is_finite() || !phi.is_finite() || !times.iter().all(|v| v.is_finite()) {
                return Err(Sl2Error::NonFinite("beta/phi/t").into());
            }
            let mut t = Table::new("geodesic", &["beta", "phi", "t", "g11", "g12", "g21", "g22", "det"]);
            for &time in times {
                let g = geodesic_point(&GeodesicParams::new(*beta, *phi, time));
                let mut row: Vec<Field> = vec![(*beta).into(), (*phi).into(), time.into()];
                row.extend(matrix_fields(&g)?);
                row.push(g.det().into());
                t.push(row);
            }
            t
        }
        Command::CutTime { beta } => {
            let mut t = Table::new("cut-time", &["beta", "t", "regime", "bracket_lo", "bracket_hi", "residual"]);
            for &b in beta {
                if !b.is_finite() {
                    return Err(Sl2Error::NonFinite("beta").into());
                }
                let r = cut_time(b);
                t.push(vec![
                    b.into(),
                    r.t.into(),
                    r.regime.label().into(),
                    r.bracket.map(|x| x.0).into(),
                    r.bracket.map(|x| x.1).into(),
                    r.residual.into(),
                ]);
            }
            t
        }
        Command::CutCurve { beta_min, beta_max, samples, landmarks } => {
            let rows = cut_curve(*beta_min, *beta_max, *samples, *landmarks)?;
            let mut t = Table::new("cut-curve", &["beta", "t", "regime", "residual"]);
            for r in rows {
                t.push(vec![r.beta.into(), r.t.into(), r.regime.label().into(), r.residual.into()]);
            }
            t
        }
        Command::Log { g11, g12, g21, g22 } => {
            let g = GroupElement::new(*g11, *g12, *g21, *g22)?;
            let r = sr_log_with(&g, &LogOptions { match_tol: match_tol()? })?;
            let mut t = Table::new(
                "log",
                &["distance", "multiplicity", "solutions", "beta", "phi", "t", "endpoint_error"],
            );
            for s in &r.solutions {
                t.push(vec![
                    r.distance.into(),
                    format!("{:?}", r.multiplicity).into(),
                    r.solutions.len().into(),
                    s.beta.into(),
                    s.phi.into(),
                    s.t.into(),
                    geodesic_point(s).sup_dist(&g).into(),
                ]);
            }
            t
        }
        Command::Distance { g11, g12, g21, g22 } => {
            let g = GroupElement::new(*g11, *g12, *g21, *g22)?;
            let r = sr_log_with(&g, &LogOptions { match_tol: match_tol()? })?;
            let mut t = Table::new("distance", &["distance"]);
            t.push(vec![r.distance.into()]);
            t
        }
        Command::Conjugate { beta, t_max } => {
            let points = conjugate_points(*beta, *t_max)?;
            let mut t = Table::new("conjugate", &["beta", "index", "t", "kind", "x"]);
            for (i, c) in points.iter().enumerate() {
                let (kind, x) = match c.kind {
                    ConjugateKind::FirstClosure => ("first-closure", PI),
                    ConjugateKind::Tangent { x } => ("tangent", x),
                };
                t.push(vec![(*beta).into(), (i + 1).into(), c.t.into(), kind.into(), x.into()]);
            }
            t
        }
        Command::Verify { suite, seed } => {
            let report = verify::run(*suite, *seed);
            let text = match format {
                Format::Json => {
                    let mut v = serde_json::to_value(&report)
                        .map_err(|e| Failure::Numerical(format!("cannot serialize report: {e}")))?;
                    if let Value::Object(map) = &mut v {
                        map.insert("schema_version".into(), SCHEMA_VERSION.into());
                        map.insert("command".into(), "verify".into());
                    }
                    let mut s = render_json(&v);
                    s.push('\n');
                    s
                }
                Format::Csv => verify_table(&report).render(Format::Csv),
            };
            emit(cli, &text)?;
            if !report.ok {
                eprintln!("verify: some checks failed");
                return Ok(2);
            }
            return Ok(0);
        }
    };
    emit(cli, &table.render(format))?;
    Ok(0)
}

fn verify_table(report: &verify::VerifyReport) -> Table {
    let mut t = Table::new(
        "verify",
        &["seed", "suite", "kind", "name", "passed", "total", "worst", "bound", "ok"],
    );
    for s in &report.suites {
        for c in &s.checks {
            t.push(vec![
                Field::Int(report.seed as i64),
                s.suite.name().into(),
                "check".into(),
                c.name.clone().into(),
                c.passed.into(),
                c.total.into(),
                c.worst.into(),
                c.bound.into(),
                c.ok().into(),
            ]);
        }
        for (k, v) in &s.metrics {
            t.push(vec![
                Field::Int(report.seed as i64),
                s.suite.name().into(),
                "metric".into(),
                k.clone().into(),
                Field::Empty,
                Field::Empty,
                (*v).into(),
                Field::Empty,
                Field::Empty,
            ]);
        }
    }
    t
}
