//! Command-line front end.
//!
//! Each subcommand turns a [`RunConfig`] into a [`Table`], which is written
//! as CSV or JSON. The binary in `src/bin` only parses flags and maps
//! [`CliError`] to an exit code.

pub mod commands;
pub mod config;
pub mod output;
pub mod validate;

use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};
use thiserror::Error;

pub use commands::{axial_table, center_table, force_table, plane_table, potential_table, CommandOutput};
pub use config::{Format, RunConfig, ScanKind};
pub use output::{parse_csv, render, Table};
pub use validate::{run_validation, CheckResult, ValidationReport};

use crate::error::Error;
use crate::fieldmap::{Method, DEFAULT_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Validation(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Center,
    Axial,
    Plane,
    Force,
    Potential,
    Validate,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Center => "center",
            Command::Axial => "axial",
            Command::Plane => "plane",
            Command::Force => "force",
            Command::Potential => "potential",
            Command::Validate => "validate",
        }
    }
}

/// Everything a subcommand needs besides its name.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub config: RunConfig,
    /// Overrides `[output] path`.
    pub out: Option<PathBuf>,
    /// Overrides `[output] format`.
    pub format: Option<Format>,
    pub tolerance: f64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub quadrature: bool,
    pub seed: u64,
}

impl Options {
    pub fn new(config: RunConfig) -> Self {
        Options {
            config,
            out: None,
            format: None,
            tolerance: DEFAULT_TOLERANCE,
            threads: None,
            quadrature: false,
            seed: validate::DEFAULT_SEED,
        }
    }

    pub fn method(&self) -> Method {
        if self.quadrature {
            Method::Quadrature
        } else {
            Method::Auto
        }
    }

    fn check(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        Ok(())
    }
}

/// Output of one subcommand, rendered and ready to write.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub text: String,
    /// Set when some rows are flagged, or a validation check failed; the
    /// text is still written before the error is reported.
    pub failure: Option<CliError>,
}

/// Runs `command` and renders its output without writing it anywhere.
pub fn render_command(command: Command, options: &Options) -> Result<Rendered, CliError> {
    options.check()?;
    match options.threads {
        None => render_inner(command, options),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Io(format!("cannot start {n} worker threads: {e}")))?
            .install(|| render_inner(command, options)),
    }
}

fn render_inner(command: Command, options: &Options) -> Result<Rendered, CliError> {
    let cfg = &options.config;
    let format = options.format.unwrap_or(cfg.output.format);
    let started = Instant::now();

    if command == Command::Validate {
        let report = run_validation(cfg, options.tolerance, options.seed)?;
        let elapsed = started.elapsed().as_secs_f64();
        let mut doc = report.to_json();
        doc["metadata"] = metadata(command, options, elapsed, Value::Null);
        let mut text = serde_json::to_string_pretty(&doc).expect("json values serialize");
        text.push('\n');
        let failure = (!report.passed()).then(|| {
            CliError::Validation(format!("failed checks: {}", report.failed_names().join(", ")))
        });
        return Ok(Rendered { text, failure });
    }

    let method = options.method();
    let tol = options.tolerance;
    let out = match command {
        Command::Center => center_table(cfg, method, tol)?,
        Command::Axial => axial_table(cfg, method, tol)?,
        Command::Plane => plane_table(cfg, method, tol)?,
        Command::Force => force_table(cfg, method, tol)?,
        Command::Potential => potential_table(cfg, method, tol)?,
        Command::Validate => unreachable!(),
    };
    let elapsed = started.elapsed().as_secs_f64();
    log::info!("{} computed {} rows in {elapsed:.3} s", command.name(), out.table.rows.len());

    let trap = out.trap.as_ref().map_or(Value::Null, |t| json!({ "depth": t.depth, "location": t.location }));
    let text = render(&out.table, metadata(command, options, elapsed, trap), format, cfg.output.precision)?;
    let flagged = out.table.rows.iter().filter(|r| r.status == crate::fieldmap::RowStatus::NonConverged).count();
    let failure = (flagged > 0).then(|| {
        CliError::NonConvergence(format!("{flagged} of {} rows did not converge", out.table.rows.len()))
    });
    Ok(Rendered { text, failure })
}

fn metadata(command: Command, options: &Options, elapsed: f64, trap: Value) -> Value {
    json!({
        "code_version": env!("CARGO_PKG_VERSION"),
        "command": command.name(),
        "config": options.config.to_json(),
        "tolerance": options.tolerance,
        "method": options.method(),
        "seed": options.seed,
        "trap": trap,
        "timings": { "compute_seconds": elapsed },
    })
}

/// Runs `command` and writes its output to the configured path, or to
/// stdout when none is set. Nothing is written when the run fails before
/// producing a table.
pub fn execute(command: Command, options: &Options) -> Result<(), CliError> {
    let rendered = render_command(command, options)?;
    let path = options.out.clone().or_else(|| options.config.output.path.clone());
    match path {
        Some(p) => std::fs::write(&p, &rendered.text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(rendered.text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    match rendered.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config(String::new()).exit_code(), 2);
        assert_eq!(CliError::NonConvergence(String::new()).exit_code(), 3);
        assert_eq!(CliError::Validation(String::new()).exit_code(), 4);
        let e: CliError = Error::Domain("x".into()).into();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn bad_options() {
        let mut o = Options::new(RunConfig::default());
        o.tolerance = 0.0;
        assert_eq!(render_command(Command::Center, &o).unwrap_err().exit_code(), 2);
        o.tolerance = 1e-9;
        o.threads = Some(0);
        assert_eq!(render_command(Command::Center, &o).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn center_json_has_metadata() {
        let mut o = Options::new(RunConfig::default());
        o.format = Some(Format::Json);
        let r = render_command(Command::Center, &o).unwrap();
        assert!(r.failure.is_none());
        let v: Value = serde_json::from_str(&r.text).unwrap();
        assert_eq!(v["metadata"]["command"], "center");
        assert_eq!(v["metadata"]["config"]["mirrors"]["rho"], 0.98);
        assert_eq!(v["rows"].as_array().unwrap().len(), 121);
    }

    fn write(dir: &std::path::Path, name: &str, text: &str) -> RunConfig {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        RunConfig::from_path(&p).unwrap()
    }

    fn to_file(command: Command, mut o: Options, path: &std::path::Path) -> Result<String, CliError> {
        o.out = Some(path.to_owned());
        execute(command, &o).map(|_| std::fs::read_to_string(path).unwrap())
    }

    #[test]
    fn center_csv_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let text = to_file(Command::Center, Options::new(RunConfig::default()), &dir.path().join("c.csv")).unwrap();
        let (header, rows) = parse_csv(&text).unwrap();
        assert_eq!(
            header,
            ["detuning_linewidths", "gamma_parallel", "gamma_perpendicular", "shift_parallel", "shift_perpendicular", "status"]
        );
        let lib = center_table(&RunConfig::default(), Method::Auto, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(rows.len(), 121);
        for (a, b) in rows.iter().zip(&lib.table.rows) {
            assert_eq!(a.0, b.values);
            assert_eq!(a.1, "ok");
        }
    }

    #[test]
    fn reduced_precision_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write(dir.path(), "p.toml", "[output]\nprecision = 6\n[scan]\nstart = -1.0\nstop = 1.0\nn_points = 5\n");
        let text = to_file(Command::Center, Options::new(cfg), &dir.path().join("p.csv")).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("-1.00000e0,"), "{text}");
        assert_eq!(parse_csv(&text).unwrap().1.len(), 5);
    }

    #[test]
    fn config_error_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.toml");
        std::fs::write(&p, "[mirrors]\n\nrho = 1.2\n").unwrap();
        let e = RunConfig::from_path(&p).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("line 3"), "{e}");

        let out = dir.path().join("never.csv");
        let mut o = Options::new(RunConfig::default());
        o.out = Some(out.clone());
        assert_eq!(execute(Command::Force, &o).unwrap_err().exit_code(), 2);
        let cfg = write(dir.path(), "range.toml", "[scan]\nstart = -400.0\n");
        o.config = cfg;
        assert_eq!(execute(Command::Axial, &o).unwrap_err().exit_code(), 2);
        assert!(!out.exists());
    }

    #[test]
    fn free_space_rows_are_constant() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write(dir.path(), "free.toml", "[mirrors]\nrho = 0.0\n[scan]\nstart = -80.0\nstop = 80.0\nn_points = 9\n");
        let text = to_file(Command::Axial, Options::new(cfg), &dir.path().join("f.csv")).unwrap();
        for (v, status) in parse_csv(&text).unwrap().1 {
            assert!((v[1] - 1.0).abs() < 1e-12 && v[2].abs() < 1e-12, "{v:?}");
            assert_eq!(status, "ok");
        }
    }

    #[test]
    fn json_force_output_and_trap_summary() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write(
            dir.path(),
            "f.toml",
            "[detuning]\nlinewidths = -0.5\n[drive]\npi_e = 0.05\n[scan]\nstart = -10.0\nstop = 10.0\nn_points = 21\n",
        );
        let mut o = Options::new(cfg);
        o.format = Some(Format::Json);
        let text = to_file(Command::Force, o, &dir.path().join("f.json")).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["metadata"]["code_version"], env!("CARGO_PKG_VERSION"));
        assert_eq!(v["metadata"]["trap"]["location"][0], 0.0);
        assert!(v["metadata"]["trap"]["depth"].as_f64().unwrap() < 0.0);
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 21);
        assert_eq!(rows[10]["force_z"], 0.0);
    }

    #[test]
    fn validate_is_reproducible() {
        let mut o = Options::new(RunConfig::default());
        o.seed = 11;
        let strip = |r: Rendered| {
            assert!(r.failure.is_none());
            let mut v: Value = serde_json::from_str(&r.text).unwrap();
            v["metadata"]["timings"] = Value::Null;
            v
        };
        let a = strip(render_command(Command::Validate, &o).unwrap());
        let b = strip(render_command(Command::Validate, &o).unwrap());
        assert_eq!(a, b);
        assert_eq!(a["passed"], true);
    }

    #[test]
    fn unreachable_tolerance_writes_rows_then_fails() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write(dir.path(), "t.toml", "[scan]\nstart = 10.0\nstop = 12.0\nn_points = 3\n");
        let mut o = Options::new(cfg);
        o.tolerance = 1e-300;
        let out = dir.path().join("t.csv");
        assert_eq!(to_file(Command::Axial, o, &out).unwrap_err().exit_code(), 3);
        let rows = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap().1;
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.1 == "non_converged"));
    }
}
