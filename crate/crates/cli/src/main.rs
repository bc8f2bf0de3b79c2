//! Command-line interface.
//!
//! Exit codes: 0 success, 1 configuration error, 2 reference-table diff
//! present, 3 internal invariant violation.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use solcurv::config::{NumericCheck, OutputFormat, Preset, RunConfig};
use solcurv::golden;
use solcurv::report::{Pipeline, RunError};

#[derive(Parser)]
#[command(
    name = "solcurv",
    about = "Curvature tensors and geometric-structure classification for diagonal \
             one-coordinate metrics with semi-symmetric non-metric connections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Built-in preset: sol3-a, sol3-b or sol3-lc.
    #[arg(long, conflicts_with = "custom")]
    preset: Option<String>,
    /// Path to a TOML configuration for a custom metric / vector field.
    #[arg(long)]
    custom: Option<PathBuf>,
    /// Sign of g33: +1 or -1. Required with --preset; overrides the config
    /// file value when given with --custom.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all tensors and emit the classification report.
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// Report format: text or json.
        #[arg(long, default_value = "text")]
        output: String,
        /// Write the report to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify computed components against a reference table file.
    Verify {
        #[command(flatten)]
        config: ConfigArgs,
        /// Reference table (`tensor indices expression` lines).
        #[arg(long)]
        golden: PathBuf,
        #[arg(long, default_value = "text")]
        output: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the symbolic pipeline against the finite-difference
    /// numeric tower at random sample points.
    Check {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 10)]
        samples: u32,
        #[arg(long, default_value_t = 20240501)]
        seed: u64,
        #[arg(long, default_value = "text")]
        output: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Config(String),
    GoldenDiff,
    Internal(String),
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Config(c) => CliError::Config(c.to_string()),
            RunError::Internal(m) => CliError::Internal(m),
        }
    }
}

fn parse_epsilon(text: &str) -> Result<i8, CliError> {
    match text {
        "+1" | "1" => Ok(1),
        "-1" => Ok(-1),
        other => Err(CliError::Config(format!(
            "epsilon must be +1 or -1, got `{other}`"
        ))),
    }
}

fn build_config(args: &ConfigArgs, output: &str) -> Result<RunConfig, CliError> {
    let format = match output {
        "text" => OutputFormat::Text,
        "json" => OutputFormat::Json,
        other => {
            return Err(CliError::Config(format!(
                "output must be text or json, got `{other}`"
            )))
        }
    };
    let mut config = match (&args.preset, &args.custom) {
        (Some(name), None) => {
            let preset = Preset::parse(name)
                .filter(|p| *p != Preset::Custom)
                .ok_or_else(|| CliError::Config(format!("unknown preset `{name}`")))?;
            let eps_text = args
                .epsilon
                .as_deref()
                .ok_or_else(|| CliError::Config("--epsilon is required".into()))?;
            RunConfig::preset(preset, parse_epsilon(eps_text)?)
                .map_err(|e| CliError::Config(e.to_string()))?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let mut cfg =
                RunConfig::from_toml(&text).map_err(|e| CliError::Config(e.to_string()))?;
            if let Some(eps_text) = args.epsilon.as_deref() {
                cfg.epsilon = parse_epsilon(eps_text)?;
            }
            cfg
        }
        _ => {
            return Err(CliError::Config(
                "exactly one of --preset or --custom is required".into(),
            ))
        }
    };
    config.output_format = format;
    Ok(config)
}

fn emit(report_text: String, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, report_text)
            .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{report_text}");
            Ok(())
        }
    }
}

fn main_inner() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            output,
            out,
        } => {
            let cfg = build_config(&config, &output)?;
            let report = solcurv::run(cfg)?;
            emit(report.render(), &out)
        }
        Command::Verify {
            config,
            golden: golden_path,
            output,
            out,
        } => {
            let cfg = build_config(&config, &output)?;
            let pipeline = Pipeline::new(cfg)?;
            let text = fs::read_to_string(&golden_path)
                .map_err(|e| CliError::Config(format!("{}: {e}", golden_path.display())))?;
            let entries = golden::parse_golden(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", golden_path.display())))?;
            let summary = golden::verify(&pipeline, &entries)
                .map_err(|e| CliError::Config(format!("{}: {e}", golden_path.display())))?;
            let clean = summary.clean();
            let report = pipeline.report(Some(summary), None);
            emit(report.render(), &out)?;
            if clean {
                Ok(())
            } else {
                Err(CliError::GoldenDiff)
            }
        }
        Command::Check {
            config,
            samples,
            seed,
            output,
            out,
        } => {
            let mut cfg = build_config(&config, &output)?;
            cfg.numeric_check = NumericCheck::On { samples, seed };
            let report = solcurv::run(cfg)?;
            emit(report.render(), &out)
        }
    }
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(()) => ExitCode::from(0),
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::GoldenDiff) => {
            eprintln!("error: reference table diffs present");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
