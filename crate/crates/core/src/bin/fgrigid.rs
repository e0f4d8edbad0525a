use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use fgrigid::connection::{newton, Coord, FormalConnection};
use fgrigid::exact::{fmt_rational, parse_rational, Rational};
use fgrigid::lie::{CartanType, RepKind};
use fgrigid::oper::canonicalize;
use fgrigid::suite::{run_suite, ClaimId, SuiteConfig};

#[derive(Parser)]
#[command(name = "fgrigid", version, about = "Exact checks on Frenkel-Gross connections, opers and Hitchin bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification jobs and write their reports.
    Verify {
        /// Claim id, or `all`.
        #[arg(long, default_value = "all")]
        claim: String,
        /// Cartan type letter; needs --rank. Defaults to the standard grid.
        #[arg(long = "type", requires = "rank")]
        cartan_type: Option<CartanType>,
        #[arg(long, requires = "cartan_type")]
        rank: Option<usize>,
        /// Added to the grid {1, 2, 1/3}; may be repeated.
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        lambda: Vec<Rational>,
        #[arg(long)]
        rep: Option<RepKind>,
        /// Comma separated points z for the Hitchin claims.
        #[arg(long, value_parser = points, allow_hyphen_values = true)]
        points: Option<PointList>,
        /// Highest weight for the sl2 check; may be repeated.
        #[arg(long)]
        weight: Vec<u32>,
        /// Work with the local connections modulo t^K.
        #[arg(long)]
        trunc: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a connection to its canonical oper form.
    Canonicalize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print residue, monodromy, slope, irregularity and exponents of a connection.
    Invariants {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Clone)]
struct PointList(Vec<Rational>);

fn points(s: &str) -> Result<PointList, String> {
    s.split(',').map(rational).collect::<Result<_, _>>().map(PointList)
}

fn read_connection(path: &Path) -> Result<FormalConnection, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: Option<&Path>, value: &impl serde::Serialize) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    match out {
        Some(p) => fs::write(p, text + "\n").map_err(|e| format!("{}: {e}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn verify(
    claim: &str,
    cartan_type: Option<CartanType>,
    rank: Option<usize>,
    lambda: Vec<Rational>,
    rep: Option<RepKind>,
    points: Option<PointList>,
    weight: Vec<u32>,
    trunc: Option<i64>,
    out: Option<&Path>,
) -> Result<bool, String> {
    let mut cfg = SuiteConfig::default();
    if claim != "all" {
        cfg.claims = vec![claim.parse::<ClaimId>().map_err(|e| e.to_string())?];
    }
    if let (Some(t), Some(r)) = (cartan_type, rank) {
        cfg.types = vec![format!("{t}{r}")];
    }
    for l in lambda {
        if !cfg.lambdas.contains(&l) {
            cfg.lambdas.push(l);
        }
    }
    cfg.rep = rep;
    if let Some(PointList(zs)) = points {
        cfg.point_sets = vec![zs];
    }
    if !weight.is_empty() {
        cfg.highest_weights = weight;
    }
    cfg.trunc = trunc;
    let result = run_suite(&cfg);
    for r in &result.reports {
        let params = serde_json::to_string(&r.params).unwrap_or_default();
        let status = match (&r.error, r.ok()) {
            (Some(e), _) => format!("ERROR ({e})"),
            (None, true) => "PASS".into(),
            (None, false) => "FAIL".into(),
        };
        eprintln!("{:<27} {params} {status}", r.claim.name());
    }
    if out.is_some() {
        emit(out, &result)?;
    }
    Ok(result.pass)
}

/// Local data of `conn`; fields that could not be computed hold `{"error": …}`
/// and clear `ok`.
fn local_invariants(conn: &FormalConnection, ok: &mut bool) -> Value {
    let failed = std::cell::Cell::new(false);
    let err = |e: fgrigid::Error| {
        failed.set(true);
        json!({ "error": e.to_string() })
    };
    let mut obj = serde_json::Map::new();
    obj.insert("coord".into(), json!(conn.coord()));
    match conn.pole_order() {
        Ok(p) => {
            obj.insert("pole_order".into(), json!(p.as_ref().map(fmt_rational)));
            let first_order = p.as_ref().is_none_or(|p| *p <= Rational::from_integer(1.into()));
            if first_order {
                let residue = conn.residue().map(|m| {
                    json!(m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
                });
                obj.insert("residue".into(), residue.unwrap_or_else(err));
                obj.insert("monodromy".into(), conn.monodromy_type().map(|m| json!(m)).unwrap_or_else(err));
            }
        }
        Err(e) => {
            obj.insert("pole_order".into(), err(e));
        }
    }
    match newton::irregular_exponents(conn) {
        Ok(ex) => {
            obj.insert("slope".into(), json!(fmt_rational(&ex.polygon.slope())));
            obj.insert("irregularity".into(), json!(fmt_rational(&ex.polygon.irregularity())));
            obj.insert("exponents".into(), json!(ex.branches));
        }
        Err(e) => {
            obj.insert("slope".into(), err(e));
        }
    }
    *ok &= !failed.get();
    Value::Object(obj)
}

fn invariants(input: &Path) -> Result<bool, String> {
    let conn = read_connection(input)?;
    let mut ok = true;
    let value = if conn.coord() == Coord::Global {
        let inf = conn.change_to_infinity().map_err(|e| e.to_string())?;
        json!({ "at_0": local_invariants(&conn.at_zero(), &mut ok), "at_infinity": local_invariants(&inf, &mut ok) })
    } else {
        local_invariants(&conn, &mut ok)
    };
    emit(None, &value)?;
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Verify { claim, cartan_type, rank, lambda, rep, points, weight, trunc, out } => {
            verify(&claim, cartan_type, rank, lambda, rep, points, weight, trunc, out.as_deref())
        }
        Command::Canonicalize { input, out } => {
            let conn = read_connection(&input)?;
            let oper = canonicalize(&conn).map_err(|e| e.to_string())?;
            emit(out.as_deref(), &oper)?;
            Ok(true)
        }
        Command::Invariants { input } => invariants(&input),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
