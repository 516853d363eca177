use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use mcgni_core::harness::{
    self, config::SCHEMA_HELP, parse_solve_config, parse_suite_config, run_solve, run_suite, suite::WORKERS_ENV,
};

#[derive(Parser)]
#[command(
    name = "mcgni",
    version,
    about = "Mixed-strategy Nash equilibria of continuous games via pushforward generators",
    after_long_help = long_help()
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver on one game and write its metrics and final strategy.
    #[command(after_long_help = long_help())]
    Solve {
        /// TOML file with [game], [solver] and [output] sections.
        config: PathBuf,
    },
    /// Run a seeded benchmark suite and write per-run CSVs plus summary.json.
    #[command(after_long_help = long_help())]
    Bench {
        /// TOML file with [suite], [solver] and [methods.<id>] sections.
        config: PathBuf,
        /// Override [suite].instances (e.g. 100 for the full protocol).
        #[arg(long)]
        instances: Option<usize>,
        /// Override [suite].output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the numerical self-checks; exits 1 if any fails.
    Check,
}

fn long_help() -> String {
    format!(
        "Configuration keys and defaults:\n\n{SCHEMA_HELP}\n\
         Environment:\n  {WORKERS_ENV}   concurrent runs in `bench` (default: available cores)\n\n\
         Exit status: 0 ok, 1 self-check failure, 2 usage, configuration or I/O error."
    )
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3e}"))
}

fn solve(path: &Path) -> anyhow::Result<()> {
    let config = parse_solve_config(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let outcome = run_solve(&config)?;
    println!(
        "{} finished: {} rows, final local regret {}{}",
        config.solver.method,
        outcome.metrics().len(),
        fmt_opt(outcome.final_regret()),
        if outcome.diverged { " (diverged)" } else { "" }
    );
    println!("artifacts in {}", config.output.display());
    Ok(())
}

fn bench(path: &Path, instances: Option<usize>, output: Option<PathBuf>) -> anyhow::Result<()> {
    let mut suite = parse_suite_config(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    if let Some(n) = instances {
        anyhow::ensure!(n >= 1, "--instances must be at least 1");
        suite.instances = n;
    }
    if let Some(dir) = output {
        suite.output = dir;
    }
    let table = run_suite(&suite)?;
    println!("{:<12} {:>5} {:<8} {:>24} {:>9}", "family", "size", "method", "final regret (mean±std)", "diverged");
    for c in &table.cells {
        let stat = match (c.mean, c.std) {
            (Some(m), Some(s)) => format!("{m:.3e} ± {s:.2e}"),
            _ => "n/a".into(),
        };
        println!("{:<12} {:>5} {:<8} {:>24} {:>5}/{}", c.family, c.size, c.method, stat, c.diverged, c.n);
    }
    println!("summary in {}", harness::suite::summary_path(&suite.output).display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { config } => solve(&config),
        Command::Bench {
            config,
            instances,
            output,
        } => bench(&config, instances, output),
        Command::Check => {
            let report = harness::selfcheck();
            print!("{report}");
            return if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
