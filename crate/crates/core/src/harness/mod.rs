//! Configuration, benchmark suites, metrics files and self-checks.

pub mod config;
pub mod metrics;
pub mod selfcheck;
pub mod solve;
pub mod suite;

pub use config::{
    emit_solve_config, emit_solver_config, emit_suite_config, parse_solve_config, parse_solver_config,
    parse_suite_config, DistChoice, Family, GameSpec, MethodRun, SolveConfig, SuiteConfig,
};
pub use metrics::{
    read_metrics_csv, read_summary_json, write_metrics_csv, write_summary_json, SummaryCell, SummaryTable,
};
pub use selfcheck::{selfcheck, CheckReport};
pub use solve::run_solve;
pub use suite::{run_suite, run_suite_with_workers, summary_from_csvs};
