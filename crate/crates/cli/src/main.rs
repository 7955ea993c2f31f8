use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use weylkit::error::{CliError, EXIT_OK};
use weylkit::{commands, json, Overrides, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "weylkit",
    version,
    about = "Light-cone and Weyl compatibility checks for scenario files"
)]
struct Cli {
    /// Relative tolerance, applied to max(1, |D|_inf)
    #[arg(long, global = true, value_name = "REAL")]
    tol: Option<f64>,
    /// Null samples per point (default 10 n^2)
    #[arg(long, global = true, value_name = "INT")]
    samples: Option<usize>,
    /// Base seed; point i uses seed XOR i
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,
    /// Relative determinant threshold below which a metric counts as degenerate
    #[arg(long, global = true, value_name = "REAL")]
    degeneracy_threshold: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check light-cone compatibility at every point; report on stdout
    Check { scenario: PathBuf },
    /// Recover the Weyl one-form at every point
    Weylize {
        scenario: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Integrate null geodesics and measure them against the connection
    Geodesic {
        scenario: PathBuf,
        #[arg(short, long, value_name = "DIR")]
        output: PathBuf,
    },
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let overrides = Overrides {
        tolerance: cli.tol,
        samples: cli.samples,
        seed: cli.seed,
        degeneracy_threshold: cli.degeneracy_threshold,
    };
    match cli.command {
        Command::Check { scenario } => {
            let scenario = Scenario::load(&scenario, &overrides)?;
            let report = commands::check(&scenario)?;
            print!("{}", json::to_string(&report)?);
            Ok(report.exit_code())
        }
        Command::Weylize { scenario, output } => {
            let scenario = Scenario::load(&scenario, &overrides)?;
            let report = commands::weylize(&scenario)?;
            write(&output, &json::to_string(&report)?)?;
            Ok(EXIT_OK)
        }
        Command::Geodesic { scenario, output } => {
            let scenario = Scenario::load(&scenario, &overrides)?;
            let summary = commands::geodesic(&scenario, &output)?;
            for g in summary.geodesics.iter().filter(|g| g.flagged) {
                eprintln!(
                    "geodesic #{}: pre-geodesic residual {:e} exceeds {:e}",
                    g.index, g.pregeodesic_residual, summary.tolerance
                );
            }
            Ok(summary.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
