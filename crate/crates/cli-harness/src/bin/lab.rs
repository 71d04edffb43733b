use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cli_harness::error::{EXIT_INVARIANT, EXIT_OK};
use cli_harness::manifest::{output_root, resolve_output};
use cli_harness::verify::{DEFAULT_DEPTH, DEFAULT_SEED};
use cli_harness::{run_file, run_verify, LabError, VerifyOptions};

/// Experiment runner for Laakso graph experiments.
#[derive(Parser, Debug)]
#[command(name = "lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the experiment described by a JSON config file.
    Run { config: PathBuf },
    /// Run the invariant suite of every module.
    Verify {
        /// Largest graph depth used by the suite.
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Output directory, relative to the output root.
        #[arg(long)]
        output: Option<String>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Print the JSON Schema of config files.
    Schema,
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn fail(e: &LabError) -> ExitCode {
    eprintln!("lab: {e}");
    code(e.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let root = output_root();
    match cli.command {
        Command::Schema => {
            println!("{}", serde_json::to_string_pretty(&cli_harness::config::schema()).expect("schema serializes"));
            code(EXIT_OK)
        }
        Command::Run { config } => match run_file(&config, &root) {
            Err(e) => fail(&e),
            Ok(report) => {
                for line in &report.summary {
                    println!("{line}");
                }
                let noun = if report.files.len() == 1 { "file" } else { "files" };
                println!("wrote {} {noun} to {}", report.files.len(), report.dir.display());
                match report.status() {
                    Ok(()) => code(EXIT_OK),
                    Err(e) => fail(&e),
                }
            }
        },
        Command::Verify { depth, seed, output, inject_fault } => {
            if depth == 0 {
                return fail(&LabError::Schema("--depth must be at least 1".into()));
            }
            let dir = resolve_output(&root, output.as_deref(), "verify");
            match run_verify(VerifyOptions { depth, seed, inject_fault }, &dir) {
                Err(e) => fail(&e),
                Ok(run) => {
                    for c in &run.report.checks {
                        println!("{}", c.line());
                    }
                    let failed = run.report.failures().len();
                    println!("{} of {} checks passed", run.report.checks.len() - failed, run.report.checks.len());
                    code(if failed == 0 { EXIT_OK } else { EXIT_INVARIANT })
                }
            }
        }
    }
}
