use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use roughlim_cli::{execute, parse, scan_csv, Results, RunConfig, RunError};

const BUDGET_ENV: &str = "ROUGHLIM_BUDGET";

#[derive(Parser)]
#[command(name = "roughlim", version, about = "Rough statistical limit sets of double sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analysis described by a JSON configuration.
    Run {
        config: PathBuf,
        /// Report path; overrides `outputs.report`. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV plot data for scan analyses; overrides `outputs.csv`.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Per-call counting budget in cells; overrides the environment.
        #[arg(long)]
        budget: Option<u64>,
    },
}

fn main() -> ExitCode {
    let Command::Run { config, out, csv, seed, budget } = Cli::parse().command;
    match run(&config, out, csv, seed, budget) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("roughlim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn resolve(path: &Path, out: Option<PathBuf>, csv: Option<PathBuf>, seed: Option<u64>, budget: Option<u64>) -> Result<RunConfig, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
    let mut cfg = parse(&text).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
    let env_budget = match std::env::var(BUDGET_ENV) {
        Ok(v) => Some(v.trim().parse::<u64>().map_err(|e| RunError::Config(format!("{BUDGET_ENV}={v}: {e}")))?),
        Err(_) => None,
    };
    if let Some(b) = budget.or(env_budget) {
        cfg.tolerances.0.budget = b;
        cfg.tolerances.0.validate().map_err(|e| RunError::Config(e.to_string()))?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if out.is_some() {
        cfg.outputs.report = out;
    }
    if csv.is_some() {
        cfg.outputs.csv = csv;
    }
    Ok(cfg)
}

fn write(path: &Path, contents: &str) -> Result<(), RunError> {
    std::fs::write(path, contents).map_err(|e| RunError::Output(format!("{}: {e}", path.display())))
}

fn run(path: &Path, out: Option<PathBuf>, csv: Option<PathBuf>, seed: Option<u64>, budget: Option<u64>) -> Result<(), RunError> {
    let cfg = resolve(path, out, csv, seed, budget)?;
    if cfg.outputs.csv.is_some() && !matches!(cfg.analysis, roughlim_cli::config::Analysis::Scan { .. }) {
        return Err(RunError::Config("outputs.csv: plot data is only produced by scan analyses".into()));
    }
    let report = execute(&cfg)?;
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    if let (Some(p), Results::Scan { set }) = (&cfg.outputs.csv, &report.results) {
        write(p, &scan_csv(set))?;
    }
    match &cfg.outputs.report {
        Some(p) => write(p, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}
