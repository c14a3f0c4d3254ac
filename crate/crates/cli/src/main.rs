//! `recform`: build, factor and verify the forms of recurrence families.

mod commands;
mod error;
mod problem;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::{parse_range, Report};
use error::CliError;
use problem::Problem;

#[derive(Parser)]
#[command(name = "recform", version, about)]
struct Cli {
    /// Print the structured (JSON) form of the report.
    #[arg(long, global = true)]
    json: bool,

    /// List every monomial, including zero coefficients.
    #[arg(long, global = true)]
    dense: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print F̃, F, Δ, δ and the identity F̃(x̄) = Δ^k·δ^n.
    Form {
        /// Problem file, or the name of a bundled example.
        file: String,
    },
    /// Split F into linear factors and certify the product.
    Factor {
        file: String,
        /// Target error bound for approximated roots.
        #[arg(long, default_value_t = 1e-12)]
        precision: f64,
    },
    /// Check the identity exactly for every n in the range.
    Verify {
        file: String,
        /// Inclusive range A..B.
        #[arg(long, default_value = "0..20", allow_hyphen_values = true)]
        n_range: String,
        /// Number of worker threads.
        #[arg(long)]
        parallel: Option<usize>,
    },
    /// Tabulate sequence terms.
    Eval {
        file: String,
        /// Only this sequence (1-based).
        #[arg(long)]
        seq: Option<usize>,
        #[arg(long, default_value = "0..10", allow_hyphen_values = true)]
        n_range: String,
    },
    /// List the bundled examples, or run `form` on one of them.
    Examples { name: Option<String> },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Form { file } => commands::form(&Problem::load(file)?, cli.dense),
        Command::Factor { file, precision } => {
            if !(precision.is_finite() && *precision > 0.0) {
                return Err(CliError::Input(format!(
                    "--precision must be positive, got {precision}"
                )));
            }
            commands::factor(&Problem::load(file)?, *precision)
        }
        Command::Verify {
            file,
            n_range,
            parallel,
        } => commands::verify(&Problem::load(file)?, parse_range(n_range)?, *parallel),
        Command::Eval { file, seq, n_range } => {
            commands::eval(&Problem::load(file)?, *seq, parse_range(n_range)?)
        }
        Command::Examples { name } => commands::examples(name.as_deref(), cli.dense),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("serializable")
                );
            } else {
                print!("{}", report.text);
            }
            if report.certified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
