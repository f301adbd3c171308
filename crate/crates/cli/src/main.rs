use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use greenball_cli::config::Config;
use greenball_cli::report::{write_csv, write_json, VerificationReport};
use greenball_cli::{run, CliError, Command};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Numerical verification of ball potential theory.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON configuration file; built-in defaults otherwise.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report destination; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Overrides every quadrature level in the configuration.
    #[arg(long)]
    level: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

fn emit(report: &VerificationReport, format: Format, out: Option<&PathBuf>) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Csv => write_csv(report, sink).map_err(|e| CliError::Output(e.to_string())),
        Format::Json => write_json(report, sink).map_err(|e| CliError::Output(e.to_string())),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(var) = std::env::var("GREENBALL_THREADS") else {
        return Ok(());
    };
    let threads: usize = var
        .parse()
        .map_err(|_| CliError::Config(format!("GREENBALL_THREADS must be a positive integer, got {var:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = (|| {
        configure_threads()?;
        let mut cfg = Config::load(args.config.as_deref())?;
        if let Some(level) = args.level {
            if level == 0 {
                return Err(CliError::Config("--level must be at least 1".into()));
            }
            cfg.override_level(level);
        }
        if let Some(seed) = args.seed {
            cfg.seed = seed;
        }
        let report = run(args.command, &cfg)?;
        emit(&report, args.format, args.out.as_ref())?;
        Ok(report)
    })();
    match result {
        Ok(report) if report.pass => ExitCode::SUCCESS,
        Ok(report) => {
            let failed: Vec<_> = report.failed_rows().map(|r| format!("{} [{}]", r.case, r.inputs)).collect();
            eprintln!("verification failed: {} of {} rows", failed.len(), report.rows.len());
            for f in failed {
                eprintln!("  {f}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
