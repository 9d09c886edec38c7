use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dotmem_cli::{run_scenario, schema, validate_scenario, Overrides};

#[derive(Parser)]
#[command(
    name = "dotmem",
    version,
    about = "Scenario runner for the dot-register simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario document and write its outputs and manifest.
    Run {
        /// Path to the scenario JSON document.
        scenario: PathBuf,
        /// Override the document's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for sweep points and Monte Carlo shots.
        #[arg(long)]
        threads: Option<usize>,
        /// Directory that output paths are resolved against.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and semantically validate a scenario document.
    Validate { scenario: PathBuf },
    /// Print the scenario schema (optionally for one kind).
    Schema { kind: Option<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            scenario,
            seed,
            threads,
            out,
        } => {
            let overrides = Overrides {
                seed,
                out_dir: out,
                threads,
            };
            match run_scenario(&scenario, &overrides) {
                Ok(outcome) => {
                    println!("run {} complete", outcome.run_id);
                    for path in &outcome.outputs {
                        println!("  wrote {}", path.display());
                    }
                    println!("  manifest {}", outcome.manifest.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code())
                }
            }
        }
        Command::Validate { scenario } => match validate_scenario(&scenario) {
            Ok(doc) => {
                println!("ok: {} scenario, seed {}", doc.kind.name(), doc.seed);
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code())
            }
        },
        Command::Schema { kind } => match schema::describe(kind.as_deref()) {
            Ok(text) => {
                println!("{text}");
                ExitCode::SUCCESS
            }
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        },
    }
}
