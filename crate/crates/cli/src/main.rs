use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use s4bell_cli::{
    cmd_bound, cmd_game, cmd_histogram, cmd_orbit, cmd_verify, default_threads, orbit_csv, BoundMode, CliError,
    GameMode, RunReport, VerifyOptions,
};

#[derive(Debug, Parser)]
#[command(
    name = "s4bell",
    version,
    about = "S4-symmetric three-outcome Bell inequality toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Export {
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the representation, orbits, Clebsch-Gordan blocks and fixtures.
    VerifyGroup {
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Shift one reference coordinate before labelling (fault injection).
        #[arg(long, hide = true, allow_negative_numbers = true)]
        perturb_fixture: Option<f64>,
    },
    /// Print the labelled 24-vector orbit.
    Orbit {
        /// Write the orbit as CSV to stdout instead of a report.
        #[arg(long, value_enum)]
        export: Option<Export>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Quantum or classical bound of the inequality.
    #[command(group(ArgGroup::new("mode").required(true).args(["quantum", "classical"])))]
    Bound {
        #[arg(long)]
        quantum: bool,
        #[arg(long)]
        classical: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Worker threads for the classical enumeration.
        #[arg(long)]
        threads: Option<NonZeroUsize>,
    },
    /// Histogram of the classical coefficient over all strategies.
    Histogram {
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        threads: Option<NonZeroUsize>,
        /// CSV destination.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// The inequality as a nonlocal game.
    #[command(group(ArgGroup::new("mode").required(true).args(["table", "optimize", "quantum"])))]
    Game {
        /// Winning answer pairs per question pair.
        #[arg(long)]
        table: bool,
        /// Best classical winning probability.
        #[arg(long)]
        optimize: bool,
        /// Winning probability of the maximally entangled state.
        #[arg(long)]
        quantum: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        threads: Option<NonZeroUsize>,
    },
}

fn threads(flag: Option<NonZeroUsize>) -> usize {
    flag.map_or_else(default_threads, NonZeroUsize::get)
}

fn emit(report: &RunReport, format: Format) -> ExitCode {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
    }
    ExitCode::from(report.exit_code())
}

fn fail(err: CliError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(err.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::VerifyGroup {
            format,
            perturb_fixture,
        } => {
            let report = cmd_verify(VerifyOptions {
                fixture_perturbation: perturb_fixture,
            });
            emit(&report, format)
        }
        Command::Orbit { export, format } => {
            let (report, orbit) = cmd_orbit();
            match (export, orbit) {
                (Some(Export::Csv), Some(orbit)) if report.passed() => {
                    print!("{}", orbit_csv(&orbit));
                    ExitCode::SUCCESS
                }
                (Some(Export::Csv), _) => {
                    eprint!("{}", report.to_text());
                    ExitCode::from(report.exit_code())
                }
                (None, _) => emit(&report, format),
            }
        }
        Command::Bound {
            quantum,
            format,
            threads: n,
            ..
        } => {
            let mode = if quantum {
                BoundMode::Quantum
            } else {
                BoundMode::Classical
            };
            match cmd_bound(mode, threads(n)) {
                Ok(report) => emit(&report, format),
                Err(e) => fail(e),
            }
        }
        Command::Histogram {
            threads: n,
            out,
            format,
        } => match cmd_histogram(threads(n), out.as_deref()) {
            Ok((report, csv)) => {
                if out.is_none() {
                    // The CSV owns stdout; the report goes to stderr.
                    print!("{csv}");
                    match format {
                        Format::Text => eprint!("{}", report.to_text()),
                        Format::Json => eprintln!("{}", report.to_json()),
                    }
                    ExitCode::from(report.exit_code())
                } else {
                    emit(&report, format)
                }
            }
            Err(e) => fail(e),
        },
        Command::Game {
            table,
            optimize,
            format,
            threads: n,
            ..
        } => {
            let mode = if table {
                GameMode::Table
            } else if optimize {
                GameMode::Optimize
            } else {
                GameMode::Quantum
            };
            match cmd_game(mode, threads(n)) {
                Ok(report) => emit(&report, format),
                Err(e) => fail(e),
            }
        }
    }
}
