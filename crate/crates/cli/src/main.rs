// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! `qsg`: run verification scenarios, list the backend catalog, self-test.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qsg_core::scenario::{emit_report, list_catalog, run_scenario, Format, ScenarioConfig};
use qsg_core::selftest::run_selftest;
use qsg_core::Error;

#[derive(Parser)]
#[command(name = "qsg", version, about = "Quasi-semigroup spectral verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and emit its report.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall_time_ms in the report (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// List the built-in backends.
    List,
    /// Run the numerical kernel self-tests and catalog smoke runs.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Table => Format::Table,
        }
    }
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn run(config: PathBuf, format: OutputFormat, out: Option<PathBuf>, timing: bool) -> Result<u8, Error> {
    let text = std::fs::read_to_string(&config).map_err(|e| Error::Io(format!("{}: {e}", config.display())))?;
    let cfg = ScenarioConfig::from_toml(&text)?;
    let start = Instant::now();
    let mut report = run_scenario(&cfg)?;
    if timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    let body = emit_report(&report, format.into());
    match out {
        Some(path) => std::fs::write(&path, &body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    let s = report.summary;
    eprintln!(
        "{}: {} records, {} PASS, {} FAIL, {} REPORT-ONLY",
        report.scenario_id, s.total, s.pass, s.fail, s.report_only
    );
    Ok(if report.has_failures() { EXIT_FAIL } else { 0 })
}

fn selftest() -> u8 {
    let rep = run_selftest();
    for c in &rep.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {:<32} worst {:.3e} limit {:.1e}  {}", c.name, c.worst, c.limit, c.detail);
    }
    println!("selftest finished in {} ms", rep.elapsed_ms);
    if rep.passed() {
        0
    } else {
        EXIT_FAIL
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            config,
            format,
            out,
            timing,
        } => match run(config, format, out, timing) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("qsg: {e}");
                match e {
                    Error::Config { .. } | Error::Catalog(_) | Error::Io(_) => EXIT_CONFIG,
                    _ => EXIT_FAIL,
                }
            }
        },
        Command::List => {
            for (name, description) in list_catalog() {
                println!("{name:<24} {description}");
            }
            0
        }
        Command::Selftest => selftest(),
    };
    ExitCode::from(code)
}
