//! Command-line front end: polarisation classification, general-type
//! certification, degree sweeps, root enumeration, and discriminant-module
//! reports. All results are JSON on standard output; progress goes to
//! standard error.

use clap::{Parser, Subcommand};
use polcert::polarisation::PolarisationType;
use polcert::pullback::SweepCheck;
use polcert::report::{self, Report};
use serde::Serialize;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "polcert", version, about = "Exact lattice computations for polarisation certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the polarisation classes of an even positive degree
    Classify {
        /// degree 2d of the polarisation
        #[arg(long)]
        degree: i64,
    },
    /// Produce a certification report for one polarisation class
    Certify {
        #[arg(long)]
        degree: i64,
        /// "split" or "nonsplit"
        #[arg(long = "type")]
        class_type: String,
        /// also write the report to this path
        #[arg(long)]
        json: Option<std::path::PathBuf>,
    },
    /// Run a verification sweep over degrees 1..=dmax
    Sweep {
        #[arg(long)]
        dmax: i64,
        /// low-weight | no-18 | one-root | eichler-congruence
        #[arg(long)]
        check: String,
        /// lift the default dmax guard
        #[arg(long, default_value_t = false)]
        force: bool,
    },
    /// Enumerate vectors of a given norm in a lattice expression
    Roots {
        /// lattice expression, e.g. "E6" or "2U+A2(-1)"
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        norm: i64,
        /// comma-separated coordinates; restrict to vectors orthogonal to this
        #[arg(long = "orthogonal-to")]
        orthogonal_to: Option<String>,
    },
    /// Report the discriminant quadratic module of a lattice expression
    Disc {
        #[arg(long)]
        lattice: String,
    },
}

fn main() -> ExitCode {
    configure_workers();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn configure_workers() {
    if let Ok(v) = std::env::var("POLCERT_WORKERS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn emit<T: Serialize>(command: &str, result: T, started: Instant, json_path: Option<&std::path::Path>) -> polcert::Result<()> {
    let mut report = Report::new(command, result);
    report.timing_ms = Some(started.elapsed().as_millis());
    let text = report.to_json();
    print!("{text}");
    if let Some(path) = json_path {
        std::fs::write(path, &text)
            .map_err(|e| polcert::Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> polcert::Result<ExitCode> {
    let started = Instant::now();
    match cli.command {
        Command::Classify { degree } => {
            let result = report::classify_result(degree)?;
            emit("classify", result, started, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { degree, class_type, json } => {
            let class_type = PolarisationType::parse(&class_type)?;
            eprintln!("certifying degree {degree} ({})", class_type.as_str());
            let result = report::certify_result(degree, class_type)?;
            emit("certify", result, started, json.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { dmax, check, force } => {
            let check = SweepCheck::parse(&check)?;
            eprintln!("sweep over d = 1..={dmax}");
            let result = polcert::pullback::run_sweep(check, dmax, force)?;
            let all_pass = result.all_pass;
            emit("sweep", result, started, None)?;
            if all_pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Roots { lattice, norm, orthogonal_to } => {
            let orth = match orthogonal_to {
                None => None,
                Some(s) => Some(
                    s.split(',')
                        .map(|t| {
                            t.trim().parse::<i64>().map_err(|_| {
                                polcert::Error::Invalid(format!("bad coordinate: {t}"))
                            })
                        })
                        .collect::<polcert::Result<Vec<i64>>>()?,
                ),
            };
            let result = report::roots_result(&lattice, norm, orth)?;
            emit("roots", result, started, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Disc { lattice } => {
            let result = report::disc_result(&lattice)?;
            emit("disc", result, started, None)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
