use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vacuum_trap::cli::{execute, CliError, Command, Format, Options, RunConfig};
use vacuum_trap::fieldmap::DEFAULT_TOLERANCE;

#[derive(Parser)]
#[command(version, about = "Cavity-modified damping, level shift and trapping force near the center of a spherical resonator")]
struct Args {
    #[command(subcommand)]
    command: Sub,
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<Format>,
    /// Grid-doubling convergence tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Integrate over the sphere even where closed forms exist.
    #[arg(long, global = true)]
    quadrature: bool,
    /// Monte-Carlo seed for `validate`.
    #[arg(long, global = true, default_value_t = vacuum_trap::cli::validate::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Damping and shift at the center against detuning.
    Center,
    /// Damping and shift along the cavity axis.
    Axial,
    /// Damping and shift over the (kz, kx) plane.
    Plane,
    /// Force and potential profile.
    Force,
    /// Excited population and potential profile.
    Potential,
    /// Run the self-check suite and print a JSON report.
    Validate,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn run(args: Args) -> Result<(), CliError> {
    let config = match &args.config {
        Some(p) => RunConfig::from_path(p)?,
        None => RunConfig::default(),
    };
    let command = match args.command {
        Sub::Center => Command::Center,
        Sub::Axial => Command::Axial,
        Sub::Plane => Command::Plane,
        Sub::Force => Command::Force,
        Sub::Potential => Command::Potential,
        Sub::Validate => Command::Validate,
    };
    let options = Options {
        out: args.out,
        format: args.format,
        tolerance: args.tolerance,
        threads: args.threads,
        quadrature: args.quadrature,
        seed: args.seed,
        ..Options::new(config)
    };
    execute(command, &options)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vacuum-trap: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
