//! Command-line front end: `kinematics`, `drag`, `verify` and `sweep`.
//!
//! Tables go to stdout, diagnostics to stderr. Exit codes are [`EXIT_OK`],
//! [`EXIT_USAGE`], [`EXIT_VERIFY_FAILED`] and [`EXIT_EMPTY_COLUMN`].

mod commands;

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::QwError;
use crate::identities::{run_suite, SuiteConfig};
use crate::params::{DeformationParams, TruncationPolicy};
use crate::table::{RowFlag, TrajectoryTable};

pub use commands::{drag_table, kinematics_table, sweep_table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_EMPTY_COLUMN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qwcalc", version, about = "Hahn (q,w)-calculus trajectories, sweeps and identity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Uniformly accelerated motion x(t)
    Kinematics(KinematicsArgs),
    /// Vertical motion against a drag, v(t)
    Drag(DragArgs),
    /// Run the randomized identity suite
    Verify(VerifyArgs),
    /// Evaluate a base command over a (q, w) grid
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub q: f64,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub w: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t_start: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub t_end: f64,
    #[arg(long, default_value_t = 11)]
    pub samples: usize,
    #[arg(long, default_value_t = TruncationPolicy::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = TruncationPolicy::DEFAULT_MAX_TERMS)]
    pub max_terms: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum KinematicsRoute {
    Closed,
    Iterative,
    SecondOrder,
    Classical,
}

#[derive(Debug, Clone, Args)]
pub struct KinematicsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub v0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub a: f64,
    /// Routes to evaluate; the classical column is always added
    #[arg(long, value_enum, value_delimiter = ',', default_value = "closed,iterative,second-order")]
    pub routes: Vec<KinematicsRoute>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum DragRoute {
    Closed,
    Series,
    Iterative,
    Classical,
}

#[derive(Debug, Clone, Args)]
pub struct DragArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 0.5)]
    pub k: f64,
    #[arg(long, default_value_t = 9.8, allow_hyphen_values = true)]
    pub g: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub v0: f64,
    /// Backward iterations; defaults to 120 without gravity, 150 with
    #[arg(long)]
    pub iter_n: Option<usize>,
    /// Routes to evaluate; the classical column is always added
    #[arg(long, value_enum, value_delimiter = ',', default_value = "closed,series,iterative")]
    pub routes: Vec<DragRoute>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.9")]
    pub q_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.1,1")]
    pub w_grid: Vec<f64>,
    #[arg(long, default_value_t = SuiteConfig::default().seed)]
    pub seed: u64,
    /// Randomized cases per identity and q
    #[arg(long, default_value_t = SuiteConfig::default().cases)]
    pub cases: usize,
    /// Overrides every per-identity tolerance
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Q,
    W,
}

/// `name=start:end:count`, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub axis: Axis,
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl std::str::FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, range) = s.split_once('=').ok_or("expected name=start:end:count")?;
        let axis = match name {
            "q" => Axis::Q,
            "w" => Axis::W,
            other => return Err(format!("unknown sweep axis '{other}', expected q or w")),
        };
        let parts: Vec<&str> = range.split(':').collect();
        let [start, end, count] = parts[..] else {
            return Err("expected start:end:count".into());
        };
        let start: f64 = start.parse().map_err(|e| format!("start: {e}"))?;
        let end: f64 = end.parse().map_err(|e| format!("end: {e}"))?;
        let count: usize = count.parse().map_err(|e| format!("count: {e}"))?;
        if count == 0 {
            return Err("count must be at least 1".into());
        }
        if !start.is_finite() || !end.is_finite() {
            return Err("start and end must be finite".into());
        }
        if count > 1 && start >= end {
            return Err("start must be below end".into());
        }
        Ok(Self { axis, start, end, count })
    }
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}:{:?}:{}", self.start, self.end, self.count)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Grid axis as q=start:end:count or w=start:end:count; repeatable
    #[arg(long = "sweep", required = true)]
    pub axes: Vec<SweepAxis>,
    #[command(subcommand)]
    pub base: BaseCommand,
}

#[derive(Debug, Clone, Subcommand)]
pub enum BaseCommand {
    Kinematics(KinematicsArgs),
    Drag(DragArgs),
}

impl BaseCommand {
    fn common(&self) -> &CommonArgs {
        match self {
            BaseCommand::Kinematics(a) => &a.common,
            BaseCommand::Drag(a) => &a.common,
        }
    }
}

impl CommonArgs {
    pub fn params(&self) -> crate::Result<DeformationParams> {
        DeformationParams::new(self.q, self.w)
    }

    pub fn policy(&self) -> crate::Result<TruncationPolicy> {
        TruncationPolicy::new(self.tol, self.max_terms)
    }

    pub fn times(&self) -> crate::Result<Vec<f64>> {
        if self.samples == 0 {
            return Err(QwError::InvalidParams("--samples must be at least 1".into()));
        }
        if !self.t_start.is_finite() || !self.t_end.is_finite() || (self.samples > 1 && self.t_start >= self.t_end) {
            return Err(QwError::InvalidParams("time range needs finite --t-start < --t-end".into()));
        }
        Ok(crate::table::linspace(self.t_start, self.t_end, self.samples))
    }
}

/// Parses `args` (program name first) and runs the selected command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[derive(Debug)]
enum Failure {
    Invalid(QwError),
    Io(io::Error),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Invalid(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "writing output: {e}"),
        }
    }
}

impl From<QwError> for Failure {
    fn from(e: QwError) -> Self {
        Failure::Invalid(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let (table, format) = match command {
        Command::Verify(args) => return verify(args, out, err),
        Command::Kinematics(args) => (kinematics_table(args)?, args.common.format),
        Command::Drag(args) => (drag_table(args)?, args.common.format),
        Command::Sweep(args) => (sweep_table(args)?, args.base.common().format),
    };
    emit(&table, format, out, err)
}

fn emit(table: &TrajectoryTable, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match format {
        Format::Csv => out.write_all(table.to_csv().as_bytes())?,
        Format::Json => out.write_all(table.to_json().as_bytes())?,
    }
    out.flush()?;

    let flagged = (0..table.len()).filter(|&i| table.flag(i) != RowFlag::Ok).count();
    if flagged > 0 {
        writeln!(err, "warning: {flagged} of {} rows flagged", table.len())?;
    }
    let mut code = EXIT_OK;
    for (name, reason) in table.empty_routes() {
        if reason == RowFlag::Nonconvergent {
            writeln!(err, "error: column '{name}' has no converged value")?;
            code = EXIT_EMPTY_COLUMN;
        }
    }
    Ok(code)
}

fn verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    if args.q_grid.is_empty() || args.w_grid.is_empty() {
        return Err(QwError::InvalidParams("empty --q-grid or --w-grid".into()).into());
    }
    for &q in &args.q_grid {
        for &w in &args.w_grid {
            DeformationParams::new(q, w)?;
        }
    }
    if let Some(tol) = args.tol {
        if tol.is_nan() || tol <= 0.0 {
            return Err(QwError::InvalidParams(format!("--tol must be positive, got {tol}")).into());
        }
    }
    let cfg = SuiteConfig {
        q_grid: args.q_grid.clone(),
        w_grid: args.w_grid.clone(),
        seed: args.seed,
        cases: args.cases,
        tol_override: args.tol,
        ..SuiteConfig::default()
    };
    let results = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "error: identity suite aborted: {e}")?;
            return Ok(EXIT_VERIFY_FAILED);
        }
    };
    let mut failed = 0;
    for r in &results {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        failed += usize::from(!r.passed());
        writeln!(
            out,
            "{:<26} q={:<5} max_residual={:.3e} tol={:.0e} {verdict}",
            r.name, r.q, r.max_residual, r.tolerance
        )?;
    }
    writeln!(out, "{} of {} checks passed", results.len() - failed, results.len())?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("qwcalc").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sweep_axis_parsing() {
        let ax: SweepAxis = "q=0.1:0.9:9".parse().unwrap();
        assert_eq!(ax, SweepAxis { axis: Axis::Q, start: 0.1, end: 0.9, count: 9 });
        assert!("w=0:1:0".parse::<SweepAxis>().is_err());
        assert!("x=0:1:3".parse::<SweepAxis>().is_err());
        assert!("q=0.9:0.1:3".parse::<SweepAxis>().is_err());
        assert!("q=0.1:0.9".parse::<SweepAxis>().is_err());
        assert!("w=1e-3:1e-3:1".parse::<SweepAxis>().is_ok());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["kinematics", "--q", "1.5"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["kinematics", "--w", "-0.1"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["drag", "--m", "0"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["kinematics", "--routes", "bogus"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["nope"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&[]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["verify", "--q-grid", "0,0.5"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_is_success() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("kinematics"));
    }

    #[test]
    fn negative_values_accepted() {
        let (code, out, err) = run_capture(&["kinematics", "--v0", "-2", "--x0", "-1e-1"]);
        assert_eq!(code, EXIT_OK, "{err}");
        assert!(out.contains("# v0=-2.0"));
    }

    #[test]
    fn nonconvergent_column_exits_3() {
        let (code, out, err) = run_capture(&["kinematics", "--routes", "iterative", "--max-terms", "5"]);
        assert_eq!(code, EXIT_EMPTY_COLUMN, "{err}");
        assert!(out.contains("nonconvergent"));
        assert!(err.contains("iterative"));
    }

    #[test]
    fn tables_keep_t_increasing() {
        let cli =
            Cli::try_parse_from(["qwcalc", "sweep", "--sweep", "q=0.2:0.8:3", "--sweep", "w=0:1:2", "drag"]).unwrap();
        let Command::Sweep(args) = cli.command else { unreachable!() };
        let table = sweep_table(&args).unwrap();
        assert_eq!(table.len(), 3 * 2 * 11);
        assert!(table.t_is_increasing());
        assert_eq!(table.meta("base"), Some("drag"));
    }

    #[test]
    fn verify_tiny_tolerance_fails() {
        let (code, out, _) = run_capture(&["verify", "--tol", "1e-30", "--cases", "10"]);
        assert_eq!(code, EXIT_VERIFY_FAILED);
        assert!(out.contains("FAIL"));
    }
}
