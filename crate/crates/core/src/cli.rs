//! Command-line front end. [`run`] holds the whole program so it can be
//! driven in-process; the binary only forwards `std::env::args`.
//!
//! Exit codes: 0 when every check holds, 1 on usage or input errors, 2 when
//! a numerical bound check fails.

use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::bounds::{self, BoundOptions, SuiteReport};
use crate::moments;
use crate::num_fmt::sig12;
use crate::report::{AnalysisReport, ReportEnvelope};
use crate::revenue;
use crate::spec;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BOUND_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "posted-price", version, about = "Optimal posted-price revenue and its lower bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments, optimal revenue and both bounds for one law, as JSON.
    Analyze {
        /// Distribution, e.g. "mix(0.5*pointmass(v=2), 0.5*uniform(a=0, b=1))".
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = revenue::DEFAULT_GRID)]
        grid: usize,
        /// Monte Carlo draws for the log-expectation cross-check.
        #[arg(long, default_value_t = 100_000)]
        mc_samples: usize,
        /// Record wall-clock time in `runtime_ms` (makes output vary).
        #[arg(long)]
        timing: bool,
    },
    /// Revenue curve as CSV: price, revenue_right, revenue_left.
    Curve {
        spec: String,
        #[arg(long)]
        pmin: f64,
        #[arg(long)]
        pmax: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Log-spaced prices.
        #[arg(long)]
        log: bool,
    },
    /// Checks both bounds on a batch of seeded random laws.
    Verify {
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated families; each case is then a single member of
        /// one of them instead of a random mixture.
        #[arg(long, value_delimiter = ',')]
        families: Option<Vec<String>>,
        #[arg(long)]
        json: bool,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Analyze {
            spec,
            seed,
            grid,
            mc_samples,
            timing,
        } => analyze(&spec, seed, grid, mc_samples, timing, out),
        Command::Curve {
            spec,
            pmin,
            pmax,
            points,
            log,
        } => curve(&spec, pmin, pmax, points, log, out),
        Command::Verify {
            n,
            seed,
            families,
            json,
        } => verify(n, seed, families, json, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            error_exit_code(&e)
        }
    }
}

/// A failed internal consistency check is a bound failure; anything else
/// is a usage error.
fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconsistent { .. } => EXIT_BOUND_FAILED,
        _ => EXIT_USAGE,
    }
}

fn analyze(
    text: &str,
    seed: u64,
    grid: usize,
    mc_samples: usize,
    timing: bool,
    out: &mut dyn Write,
) -> crate::Result<i32> {
    let started = Instant::now();
    if grid < revenue::MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "--grid must be at least {}",
            revenue::MIN_GRID
        )));
    }
    if mc_samples < 2 {
        return Err(Error::InvalidArgument("--mc-samples must be at least 2".into()));
    }
    let d = spec::parse_and_build(text)?;
    let opts = BoundOptions {
        grid_size: grid,
        ..BoundOptions::default()
    };
    let moments = moments::moments_report(d.as_ref(), opts.moments_tol, mc_samples, seed);
    let opt = revenue::optimal_revenue(d.as_ref(), opts.grid_size, opts.refine_tol);
    let bounds = bounds::bound_report(d.as_ref(), &opts)?;

    let mut env = ReportEnvelope::new(text, seed);
    env.reports
        .insert("moments".into(), AnalysisReport::Moments(moments));
    env.reports
        .insert("optimal_revenue".into(), AnalysisReport::OptimalRevenue(opt));
    env.reports
        .insert("theorem1".into(), AnalysisReport::Bounds(bounds));
    if bounds.expectation.is_finite() {
        env.reports
            .insert("theorem2".into(), AnalysisReport::Bounds(bounds));
    }
    if timing {
        env.runtime_ms = started.elapsed().as_millis() as u64;
    }
    write_all(out, env.to_json().as_bytes())?;
    Ok(if bounds.all_hold() {
        EXIT_OK
    } else {
        EXIT_BOUND_FAILED
    })
}

fn curve(
    text: &str,
    pmin: f64,
    pmax: f64,
    points: usize,
    log: bool,
    out: &mut dyn Write,
) -> crate::Result<i32> {
    if !(pmin > 0.0 && pmax > pmin && pmax.is_finite()) || points < 2 {
        return Err(Error::InvalidArgument(
            "curve needs 0 < pmin < pmax and at least 2 points".into(),
        ));
    }
    let d = spec::parse_and_build(text)?;
    let mut buf = String::from("price,revenue_right,revenue_left\n");
    for i in 0..points {
        let t = i as f64 / (points - 1) as f64;
        let p = if i == points - 1 {
            pmax
        } else if log {
            pmin * (pmax / pmin).powf(t)
        } else {
            pmin + (pmax - pmin) * t
        };
        let q = revenue::revenue_at(d.as_ref(), p)?;
        buf.push_str(&format!(
            "{},{},{}\n",
            sig12(q.price),
            sig12(q.revenue_right),
            sig12(q.revenue_left)
        ));
    }
    write_all(out, buf.as_bytes())?;
    Ok(EXIT_OK)
}

fn verify(
    n: usize,
    seed: u64,
    families: Option<Vec<String>>,
    json: bool,
    out: &mut dyn Write,
) -> crate::Result<i32> {
    let names: Option<Vec<&str>> = families
        .as_ref()
        .map(|f| f.iter().map(|s| s.trim()).collect());
    let suite = bounds::verify_suite(n, seed, names.as_deref())?;
    emit_suite(&suite, json, out)
}

fn emit_suite(suite: &SuiteReport, json: bool, out: &mut dyn Write) -> crate::Result<i32> {
    let text = if json {
        let mut s = serde_json::to_string_pretty(suite).expect("suite serializes");
        s.push('\n');
        s
    } else {
        suite_table(suite)
    };
    write_all(out, text.as_bytes())?;
    Ok(if suite.passed == suite.total {
        EXIT_OK
    } else {
        EXIT_BOUND_FAILED
    })
}

fn suite_table(suite: &SuiteReport) -> String {
    let mut s = format!(
        "{:>5}  {:<4}  {:>18}  {:>18}  {:<5}  spec\n",
        "case", "pass", "thm1_slack", "thm2_slack", "equal"
    );
    for case in &suite.cases {
        let (t1, t2, eq) = match &case.report {
            Some(r) => (
                sig12(r.thm1_slack),
                r.thm2_slack.map_or_else(|| "-".to_owned(), sig12),
                r.equality_flag.to_string(),
            ),
            None => ("-".into(), "-".into(), "-".into()),
        };
        s.push_str(&format!(
            "{:>5}  {:<4}  {:>18}  {:>18}  {:<5}  {}\n",
            case.index,
            if case.pass { "ok" } else { "FAIL" },
            t1,
            t2,
            eq,
            case.spec
        ));
        if let Some(e) = &case.error {
            s.push_str(&format!("       error: {e}\n"));
        }
    }
    let worst = |x: f64| if x.is_finite() { sig12(x) } else { "-".to_owned() };
    s.push_str(&format!(
        "worst thm1 slack / max(1,G): {}\nworst thm2 slack / max(1,E): {}\n{}/{} pass\n",
        worst(suite.worst_thm1_relative_slack),
        worst(suite.worst_thm2_relative_slack),
        suite.passed,
        suite.total
    ));
    s
}

fn write_all(out: &mut dyn Write, bytes: &[u8]) -> crate::Result<()> {
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|e| Error::InvalidArgument(format!("cannot write output: {e}")))
}
