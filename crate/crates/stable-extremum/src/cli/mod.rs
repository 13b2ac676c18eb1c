//! Command-line front end.
//!
//! Exit codes: 0 success, 1 bad input or internal failure, 2 regime or method
//! incompatibility, 3 tolerance failure.

pub mod config;
pub mod selftest;
pub mod tables;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::distributions::{
    cpdf_sup_many, cpdf_x_many, cpdf_x_node_counts, exchange_expectation, exchange_node_counts, joint_cpdf_many,
    joint_node_counts, sup_node_counts, EvalRequest, Method, NodeCounts,
};
use crate::error::{Error, Result};
pub use config::{Convention, ExchangePoint, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_REGIME: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

/// A row fails the tolerance check when the coarse and fine runs differ by more
/// than this multiple of the requested tolerance.
pub const EST_ERROR_FACTOR: f64 = 10.0;

#[derive(Debug, Parser)]
#[command(name = "stable-extremum", version, about = "Distributions of a stable Levy process and its running supremum")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_method)]
    pub method: Option<Method>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write CSV here instead of standard output.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Leave the timing columns empty so output is byte-reproducible.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// P[x1 + X_T <= a].
    CpdfX,
    /// P[x1 + sup X <= a].
    CpdfSup,
    /// P[x1 + X_T <= a1, max(x2, x1 + sup X) <= a2].
    JointCpdf,
    /// E[(beta (x1 + X_T) - M)_+ exp(-lambda M)] with M = max(x2, x1 + sup X).
    Exchange,
    /// Reproduce the benchmark tables.
    BenchTables {
        /// Table id in 1..8; all tables when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
        table: Option<u8>,
    },
    /// Wiener-Hopf identity, transform pairs and oracle smoke checks.
    Selftest,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Regime(_) | Error::Divergence(_) => EXIT_REGIME,
        Error::Tolerance(_) => EXIT_TOLERANCE,
        Error::Node { source, .. } => exit_code(source),
        _ => EXIT_FAILURE,
    }
}

/// 17 significant digits, `.` decimal point.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn fmt_ms(ms: Option<f64>) -> String {
    ms.map(|m| format!("{m:.3}")).unwrap_or_default()
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

/// Parses `args` and runs the command, writing CSV to `out` (or `--csv`) and
/// diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK };
        }
    };
    run_cli(&cli, out, err)
}

pub fn run_cli(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = match &cli.config {
        Some(p) => match RunConfig::load(p) {
            Ok(c) => Some(c),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_FAILURE;
            }
        },
        None => None,
    };
    let threads = cli.threads.or(cfg.as_ref().and_then(|c| c.threads)).unwrap_or(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start {threads} threads: {e}");
            return EXIT_FAILURE;
        }
    };
    let (mut buf, mut diag) = (Vec::new(), Vec::new());
    let code = pool.install(|| dispatch(cli, cfg.as_ref(), &mut buf, &mut diag));
    let _ = err.write_all(&diag);
    let sink: std::io::Result<()> = match &cli.csv {
        Some(p) => std::fs::write(p, &buf),
        None => out.write_all(&buf).and_then(|_| out.flush()),
    };
    if let Err(e) = sink {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_FAILURE;
    }
    code
}

fn dispatch(cli: &Cli, cfg: Option<&RunConfig>, out: &mut Vec<u8>, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::BenchTables { table } => return bench(cli, *table, out, err),
        Command::Selftest => return selftest_cmd(cli, cfg, out),
        cmd => match cfg {
            Some(c) => eval(cli, cmd, c, out, err),
            None => Err(Error::Config("this command needs --config FILE".into())),
        },
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

struct Row {
    inputs: Vec<f64>,
    value: f64,
    est_error: f64,
    wall_ms: f64,
    nodes: NodeCounts,
}

fn eval(cli: &Cli, cmd: &Command, cfg: &RunConfig, out: &mut Vec<u8>, err: &mut dyn Write) -> Result<i32> {
    let p = cfg.params()?;
    let is_x = matches!(cmd, Command::CpdfX);
    let method = cli.method.or(cfg.method).unwrap_or_else(|| config::default_method(&p, is_x));
    let eps = cli.eps.or(cfg.eps).unwrap_or(1e-10);
    let req = EvalRequest::new(p, cfg.t, method, eps)?;
    let coarse = EvalRequest::new(p, cfg.t, method, (eps * EST_ERROR_FACTOR).min(0.5))?;
    let (x1, x2) = (cfg.x1, cfg.x2());

    let (header, rows): (&[&str], Vec<Row>) = match cmd {
        Command::CpdfX | Command::CpdfSup => {
            let levels = cfg.levels()?;
            let f = |r: &EvalRequest, a: f64| -> Result<f64> {
                if is_x {
                    Ok(cpdf_x_many(r, x1, &[a])?[0])
                } else {
                    Ok(cpdf_sup_many(r, x1, &[a])?[0])
                }
            };
            let mut rows = Vec::new();
            for a in levels {
                let nodes = if is_x { cpdf_x_node_counts(&req)? } else { sup_node_counts(&req, x1, &[a])? };
                rows.push(timed(vec![x1, a], nodes, || f(&req, a), || f(&coarse, a))?);
            }
            (&["x", "a"], rows)
        }
        Command::JointCpdf => {
            let mut rows = Vec::new();
            for (a1, a2) in cfg.cells()? {
                if x2 > a2 {
                    return Err(Error::Precondition(format!("x2 = {x2} lies above a2 = {a2}")));
                }
                let f = |r: &EvalRequest| Ok(joint_cpdf_many(r, x1, &[(a1, a2)])?[0]);
                let nodes = joint_node_counts(&req, x1, &[(a1, a2)])?;
                rows.push(timed(vec![x1, x2, a1, a2], nodes, || f(&req), || f(&coarse))?);
            }
            (&["x1", "x2", "a1", "a2"], rows)
        }
        Command::Exchange => {
            let mut rows = Vec::new();
            for ExchangePoint { beta, lambda } in cfg.exchange_points()? {
                let f = |r: &EvalRequest| exchange_expectation(r, x1, x2, beta, lambda);
                let nodes = exchange_node_counts(&req, x1, x2)?;
                rows.push(timed(vec![x1, x2, beta, lambda], nodes, || f(&req), || f(&coarse))?);
            }
            (&["x1", "x2", "beta", "lambda"], rows)
        }
        _ => unreachable!("handled in dispatch"),
    };

    let mut w = csv_writer(&mut *out);
    let mut head: Vec<&str> = header.to_vec();
    head.extend(["value", "method", "eps_requested", "est_error", "wall_time_ms", "n_l", "n_pos", "n_neg"]);
    w.write_record(&head).map_err(io_err)?;
    let mut failed = false;
    for r in &rows {
        let mut rec: Vec<String> = r.inputs.iter().map(|&v| fmt_f64(v)).collect();
        rec.push(fmt_f64(r.value));
        rec.push(method.to_string());
        rec.push(fmt_f64(eps));
        rec.push(fmt_f64(r.est_error));
        rec.push(fmt_ms((!cli.no_timing).then_some(r.wall_ms)));
        rec.extend([r.nodes.n_l, r.nodes.n_pos, r.nodes.n_neg].map(|n| n.to_string()));
        w.write_record(&rec).map_err(io_err)?;
        if r.est_error > EST_ERROR_FACTOR * eps {
            failed = true;
            let _ = writeln!(
                err,
                "tolerance: inputs {:?}: est_error {:.3e} exceeds {EST_ERROR_FACTOR} x eps",
                r.inputs, r.est_error
            );
        }
    }
    w.flush().map_err(io_err)?;
    Ok(if failed { EXIT_TOLERANCE } else { EXIT_OK })
}

/// Evaluates at the requested tolerance and at a ten times looser one; the
/// difference is the error estimate.
fn timed(
    inputs: Vec<f64>,
    nodes: NodeCounts,
    fine: impl FnOnce() -> Result<f64>,
    coarse: impl FnOnce() -> Result<f64>,
) -> Result<Row> {
    let t0 = Instant::now();
    let value = fine()?;
    let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
    let est_error = (value - coarse()?).abs();
    Ok(Row { inputs, value, est_error, wall_ms, nodes })
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Config(format!("output: {e}"))
}

fn bench(cli: &Cli, table: Option<u8>, out: &mut Vec<u8>, err: &mut dyn Write) -> i32 {
    let eps = cli.eps.unwrap_or(1e-10);
    match tables::calibration_candidates_logged(err) {
        Ok(()) => {}
        Err(e) => {
            let _ = writeln!(err, "error: calibration failed: {e}");
            return exit_code(&e);
        }
    }
    let ids: Vec<u8> = table.map(|t| vec![t]).unwrap_or_else(|| (1..=8).collect());
    let mut w = csv_writer(&mut *out);
    let _ = w.write_record(["table", "point", "value", "reference", "abs_error", "cpu_ms", "metric"]);
    let mut code = EXIT_OK;
    for id in ids {
        let rep = match tables::bench_table(id, cli.method, eps) {
            Ok(r) => r,
            Err(e) => {
                let _ = writeln!(err, "error: table {id}: {e}");
                code = code.max(exit_code(&e));
                continue;
            }
        };
        for r in &rep.rows {
            let _ = w.write_record([
                r.table.to_string(),
                r.point.clone(),
                fmt_f64(r.value),
                fmt_f64(r.reference),
                fmt_f64(r.abs_error),
                fmt_ms((!cli.no_timing).then_some(r.cpu_ms)),
                r.metric.to_string(),
            ]);
        }
        let verdict = if rep.passed() { "ok" } else { "GATE EXCEEDED" };
        let _ = writeln!(err, "table {id}: worst {:.3e} vs gate {:.0e}: {verdict}", rep.worst(), rep.gate);
        if !rep.passed() {
            code = code.max(EXIT_TOLERANCE);
        }
    }
    let _ = w.flush();
    code
}

fn selftest_cmd(cli: &Cli, cfg: Option<&RunConfig>, out: &mut Vec<u8>) -> i32 {
    let opts = selftest::SelftestOptions {
        seed: cli.seed.or(cfg.and_then(|c| c.seed)).unwrap_or(0),
        ..Default::default()
    };
    selftest_report(&opts, out)
}

/// Runs the suite and prints one line per check; nonzero when any check fails.
pub fn selftest_report(opts: &selftest::SelftestOptions, out: &mut dyn Write) -> i32 {
    let checks = selftest::run(opts);
    let mut failures = 0;
    for c in &checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        let detail = c.error.clone().unwrap_or_else(|| format!("{:.3e} (gate {:.0e})", c.worst, c.gate));
        let _ = writeln!(out, "{status}  {:<40} {detail}", c.name);
        failures += usize::from(!c.passed());
    }
    let _ = writeln!(out, "{} of {} checks passed", checks.len() - failures, checks.len());
    if failures == 0 {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}
