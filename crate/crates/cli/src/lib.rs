//! Front end for the triple-well toolkit: configuration, sweeps, the
//! invariant suite and report emission.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod failure;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use commands::{analyze, plot, sweep, verify};
use config::{ConfigError, RawConfig, RunConfig, CONFIG_ENV};
use failure::{Failure, EXIT_CHECK_FAILED};

#[derive(Debug, Parser)]
#[command(name = "triwell", version, about = "Instanton analysis of the symmetric triple well")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report at one parameter point.
    Analyze(Flags),
    /// Instanton prediction and oracle over a parameter range.
    Sweep(Flags),
    /// Run the invariant suite.
    Verify {
        #[command(flatten)]
        flags: Flags,
        /// Skip diagonalisation, relaxation and grid-convergence checks.
        #[arg(long)]
        quick: bool,
        #[arg(long, hide = true, value_name = "FACTOR")]
        inject_kappa_scale: Option<f64>,
    },
    /// Write potential, kink, zero-mode and splitting tables.
    PlotData(Flags),
}

/// Values are kept as text so that validation names the offending field.
#[derive(Debug, Args)]
struct Flags {
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, num_args = 3, value_names = ["START", "STOP", "COUNT"], allow_hyphen_values = true)]
    alpha_range: Option<Vec<String>>,
    #[arg(long, num_args = 3, value_names = ["START", "STOP", "COUNT"], allow_hyphen_values = true)]
    beta_range: Option<Vec<String>>,
    /// Half-interval; defaults to 12/(beta^2 sqrt(2 alpha)).
    #[arg(long = "T", allow_hyphen_values = true)]
    t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    n_points: Option<String>,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Output file (a directory for plot-data).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl From<Flags> for RawConfig {
    fn from(f: Flags) -> Self {
        RawConfig {
            alpha: f.alpha,
            beta: f.beta,
            alpha_range: f.alpha_range,
            beta_range: f.beta_range,
            t: f.t,
            x_max: f.x_max,
            n_points: f.n_points,
            format: f.format,
            out: f.out,
        }
    }
}

fn emit_error(failure: &Failure) -> i32 {
    eprint!("{}", output::json_string(&failure.to_json()));
    failure.exit_code()
}

fn deliver(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Output { path: path.display().to_string(), message: e.to_string() }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Output { path: "<stdout>".to_string(), message: e.to_string() })
        }
    }
}

fn resolve(flags: Flags) -> Result<RunConfig, Failure> {
    let path = std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty()).map(PathBuf::from);
    Ok(RunConfig::resolve(flags.into(), path)?)
}

fn execute(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Analyze(flags) => {
            let config = resolve(flags)?;
            let doc = analyze::analyze(&config)?;
            deliver(config.out.as_deref(), &analyze::render(&config, &doc))?;
            Ok(0)
        }
        Command::Sweep(flags) => {
            let config = resolve(flags)?;
            let (rows, failure) = sweep::run(&config)?;
            deliver(config.out.as_deref(), &sweep::render(&config, &rows, failure.is_none()))?;
            match failure {
                Some(f) => Err(f),
                None => Ok(0),
            }
        }
        Command::Verify { flags, quick, inject_kappa_scale } => {
            let config = resolve(flags)?;
            let options = verify::VerifyOptions { quick, kappa_scale: inject_kappa_scale.unwrap_or(1.0) };
            let checks = verify::run(&config, options)?;
            deliver(config.out.as_deref(), &verify::render(&config, &checks))?;
            Ok(if verify::any_failed(&checks) { EXIT_CHECK_FAILED } else { 0 })
        }
        Command::PlotData(flags) => {
            let config = resolve(flags)?;
            let manifest = plot::run(&config)?;
            deliver(None, &output::json_string(&manifest))?;
            Ok(0)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let field = e
                .get(clap::error::ContextKind::InvalidArg)
                .map(|v| {
                    let flag = v.to_string();
                    let name = flag.split_whitespace().next().unwrap_or_default().trim_start_matches('-');
                    name.replace('-', "_")
                })
                .unwrap_or_else(|| "command".to_string());
            let rendered = e.render().to_string();
            let message = rendered.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            return emit_error(&Failure::Config(ConfigError::new(field, message)));
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(failure) => emit_error(&failure),
    }
}
