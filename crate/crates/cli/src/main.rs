// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qbm_cli::run::{run_certify, run_evolve, run_immediate, run_sweep};
use qbm_cli::{chart, read_config, sidecar, write_file, CliError, ExperimentConfig, RunOutput};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "qbm",
    version,
    about = "Covariance-matrix studies of quantum Brownian motion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve an initial state and track PPT, energy and validity.
    Evolve(Common),
    /// Build an all-times separability certificate and verify it.
    Certify(Common),
    /// Check immediate entanglement generation from a pure system state.
    Immediate(Common),
    /// Critical inverse temperature across bath sizes.
    Sweep(Common),
}

#[derive(clap::Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Override `tolerances.separability`.
    #[arg(long)]
    tol: Option<f64>,
    /// Override `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Column to chart with `--format svg`.
    #[arg(long)]
    column: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Svg,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Evolve(_) => "evolve",
            Command::Certify(_) => "certify",
            Command::Immediate(_) => "immediate",
            Command::Sweep(_) => "sweep",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Evolve(c)
            | Command::Certify(c)
            | Command::Immediate(c)
            | Command::Sweep(c) => c,
        }
    }
}

fn load(common: &Common) -> Result<ExperimentConfig, CliError> {
    let mut cfg = read_config(&common.config)?;
    if let Some(tol) = common.tol {
        cfg.tolerances.separability = tol;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(command: &Command) -> Result<bool, CliError> {
    let common = command.common();
    let cfg = load(common)?;
    let start = Instant::now();
    let out: RunOutput = match command {
        Command::Evolve(_) => run_evolve(&cfg)?,
        Command::Certify(_) => run_certify(&cfg)?,
        Command::Immediate(_) => run_immediate(&cfg)?,
        Command::Sweep(_) => run_sweep(&cfg)?,
    };
    let elapsed = start.elapsed().as_secs_f64();
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }

    let body = match common.format {
        Format::Csv => out.table.to_csv()?,
        Format::Svg => {
            let column = common.column.as_deref().unwrap_or(out.default_column);
            chart::line_chart(
                &out.table,
                column,
                &format!("qbm {}: {column}", command.name()),
            )?
        }
    };
    match &common.out {
        Some(path) => {
            write_file(path, &body)?;
            let meta = json!({
                "tool": "qbm",
                "version": env!("CARGO_PKG_VERSION"),
                "command": command.name(),
                "config": cfg,
                "summary": out.summary,
                "passed": out.passed,
                "wall_clock_seconds": elapsed,
            });
            write_file(
                &sidecar(path, "meta.json"),
                &serde_json::to_string_pretty(&meta).unwrap(),
            )?;
            if let Some(cert) = &out.certificate {
                write_file(
                    &sidecar(path, "certificate.json"),
                    &serde_json::to_string_pretty(cert).unwrap(),
                )?;
            }
        }
        None => {
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    eprintln!(
        "{}: {} ({elapsed:.3} s)\n{}",
        command.name(),
        if out.passed { "pass" } else { "FAIL" },
        serde_json::to_string_pretty(&out.summary).unwrap()
    );
    Ok(out.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
