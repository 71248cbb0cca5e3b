use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toda_cli::config::RunConfig;
use toda_cli::run::{config_digest, exit_code, info_text, report_json, run_verify, summary, write_samples};

/// Exact construction and verification of SU(n+1) Toda solutions.
#[derive(Parser)]
#[command(name = "toda", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured suites and write a JSON report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Report path; printed to stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Sample the fields on the configured grid as CSV.
    Sample {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the parsed problem.
    Info {
        #[arg(long)]
        config: PathBuf,
    },
}

const CONFIG_ERROR: u8 = 2;

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(CONFIG_ERROR)
}

fn load(path: &Path) -> Result<(Vec<u8>, RunConfig), String> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    let cfg = text.parse::<RunConfig>().map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((bytes, cfg))
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("TODA_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("TODA_THREADS must be a positive integer, got `{v}`"))?;
    if n == 0 {
        return Err("TODA_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        return fail(e);
    }
    match cli.command {
        Command::Verify { config, report } => {
            let (bytes, cfg) = match load(&config) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let result = match run_verify(&cfg) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let json = report_json(&result, &config_digest(&bytes));
            match report {
                Some(path) => {
                    if let Err(e) = fs::write(&path, json) {
                        return fail(format!("{}: {e}", path.display()));
                    }
                }
                None => print!("{json}"),
            }
            eprint!("{}", summary(&result));
            ExitCode::from(exit_code(&result) as u8)
        }
        Command::Sample { config, out } => {
            let (_, cfg) = match load(&config) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let file = match fs::File::create(&out) {
                Ok(f) => f,
                Err(e) => return fail(format!("{}: {e}", out.display())),
            };
            match write_samples(&cfg, std::io::BufWriter::new(file)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
        Command::Info { config } => {
            let (_, cfg) = match load(&config) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            match info_text(&cfg) {
                Ok(s) => {
                    print!("{s}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
