//! Seeded benchmark suites: many instances, several methods, one summary.

use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;

use super::config::{emit_suite_config, DistChoice, Family, MethodRun, SuiteConfig};
use super::metrics::{mean_std, write_metrics_csv, write_summary_json, SuiteInfo, SummaryCell, SummaryTable};
use crate::error::{Error, Result};
use crate::games::{gen_blotto, gen_gamut, gen_quadratic, EntryDist, GameInstance};
use crate::optim::{last_finite_regret, run, SolverConfig};
use crate::rng::{self, stream};

/// Environment variable holding the number of concurrent runs.
pub const WORKERS_ENV: &str = "MCGNI_WORKERS";

/// Worker count from [`WORKERS_ENV`], else the available parallelism.
pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::invalid(WORKERS_ENV, format!("expected a positive integer, got `{s}`"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Entry distribution of instance `j`.
pub fn instance_dist(suite: &SuiteConfig, j: usize) -> EntryDist {
    match suite.dist {
        DistChoice::Fixed(d) => d,
        DistChoice::Mixed => {
            let mut r = rng::seeded(instance_seed(suite, j), stream::DIST_SELECT);
            EntryDist::ALL[r.gen_range(0..EntryDist::ALL.len())]
        }
    }
}

pub fn instance_seed(suite: &SuiteConfig, j: usize) -> u64 {
    suite.seed.wrapping_add(j as u64)
}

pub fn instance_game(suite: &SuiteConfig, size: usize, j: usize) -> GameInstance {
    let seed = instance_seed(suite, j);
    match suite.family {
        Family::Quadratic => gen_quadratic(seed, size, instance_dist(suite, j)),
        Family::Blotto => gen_blotto(seed, size),
        Family::Gamut => gen_gamut(seed, suite.players, size, instance_dist(suite, j)),
    }
}

/// Solver settings of one run: the method's seeds offset by the instance seed.
pub fn instance_solver(suite: &SuiteConfig, run: &MethodRun, j: usize) -> SolverConfig {
    let offset = instance_seed(suite, j);
    let mut c = run.solver.clone();
    c.init_seed = c.init_seed.wrapping_add(offset);
    c.batch_seed = c.batch_seed.wrapping_add(offset);
    c.mcgni.eval_seed = c.mcgni.eval_seed.wrapping_add(offset);
    c
}

pub fn cell_dir(root: &Path, family: Family, size: usize, method: &str) -> PathBuf {
    root.join(format!("{}_{size}", family.id())).join(method)
}

pub fn run_csv_path(root: &Path, family: Family, size: usize, method: &str, j: usize) -> PathBuf {
    cell_dir(root, family, size, method).join(format!("instance_{j}.csv"))
}

pub fn summary_path(root: &Path) -> PathBuf {
    root.join("summary.json")
}

pub fn suite_info(suite: &SuiteConfig) -> SuiteInfo {
    SuiteInfo {
        family: suite.family.id().into(),
        sizes: suite.sizes.clone(),
        instances: suite.instances,
        seed: suite.seed,
        methods: suite.methods.iter().map(|m| m.method.id().to_string()).collect(),
        players: (suite.family == Family::Gamut).then_some(suite.players),
        dist: (suite.family != Family::Blotto).then(|| suite.dist.id().to_string()),
    }
}

struct RunResult {
    final_regret: Option<f64>,
    diverged: bool,
}

/// Runs the suite with [`worker_count`] workers.
pub fn run_suite(suite: &SuiteConfig) -> Result<SummaryTable> {
    run_suite_with_workers(suite, worker_count()?)
}

/// Runs every (size, instance, method) combination, writes one CSV per run
/// plus `summary.json`, and returns the summary.
pub fn run_suite_with_workers(suite: &SuiteConfig, workers: usize) -> Result<SummaryTable> {
    if suite.methods.is_empty() {
        return Err(Error::invalid("methods", "must list at least one method"));
    }
    let root = &suite.output;
    for &size in &suite.sizes {
        for m in &suite.methods {
            let dir = cell_dir(root, suite.family, size, m.method.id());
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
    }
    let config_path = root.join("suite.toml");
    fs::write(&config_path, emit_suite_config(suite)).map_err(|e| Error::io(&config_path, e))?;

    let games: Vec<Vec<GameInstance>> = suite
        .sizes
        .iter()
        .map(|&size| (0..suite.instances).map(|j| instance_game(suite, size, j)).collect())
        .collect();
    let jobs: Vec<(usize, usize, usize)> = (0..suite.sizes.len())
        .flat_map(|s| (0..suite.instances).flat_map(move |j| (0..suite.methods.len()).map(move |m| (s, j, m))))
        .collect();
    let job = |&(s, j, m): &(usize, usize, usize)| -> Result<RunResult> {
        let method = &suite.methods[m];
        let out = run(&instance_solver(suite, method, j), &games[s][j])?;
        let path = run_csv_path(root, suite.family, suite.sizes[s], method.method.id(), j);
        write_metrics_csv(out.metrics(), &path)?;
        Ok(RunResult {
            final_regret: out.final_regret(),
            diverged: out.diverged,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Unsupported(format!("cannot start worker pool: {e}")))?;
    let results: Vec<RunResult> = pool
        .install(|| jobs.par_iter().map(job).collect::<Vec<_>>())
        .into_iter()
        .collect::<Result<_>>()?;

    // Jobs are ordered size-major, then instance, then method.
    let mut cells = Vec::new();
    for (s, &size) in suite.sizes.iter().enumerate() {
        for (m, method) in suite.methods.iter().enumerate() {
            let per_instance: Vec<&RunResult> = (0..suite.instances)
                .map(|j| &results[(s * suite.instances + j) * suite.methods.len() + m])
                .collect();
            let finals: Vec<Option<f64>> = per_instance.iter().map(|r| r.final_regret).collect();
            let stats = finals.iter().copied().collect::<Option<Vec<f64>>>().and_then(|v| mean_std(&v));
            cells.push(SummaryCell {
                family: suite.family.id().into(),
                size,
                method: method.method.id().into(),
                mean: stats.map(|s| s.0),
                std: stats.map(|s| s.1),
                diverged: per_instance.iter().filter(|r| r.diverged).count(),
                n: suite.instances,
                final_regrets: finals,
            });
        }
    }
    let table = SummaryTable {
        suite: suite_info(suite),
        cells,
    };
    write_summary_json(&table, &summary_path(root))?;
    Ok(table)
}

/// Recomputes the summary from the per-run CSVs alone.
pub fn summary_from_csvs(suite: &SuiteConfig) -> Result<SummaryTable> {
    let mut cells = Vec::new();
    for &size in &suite.sizes {
        for m in &suite.methods {
            let id = m.method.id();
            let mut finals = Vec::new();
            let mut diverged = 0;
            for j in 0..suite.instances {
                let rows = super::metrics::read_metrics_csv(&run_csv_path(&suite.output, suite.family, size, id, j))?;
                // Completed runs end with a row past the last iteration.
                if rows.last().is_none_or(|r| r.grad_norm.is_some()) {
                    diverged += 1;
                }
                finals.push(last_finite_regret(&rows));
            }
            let stats = finals.iter().copied().collect::<Option<Vec<f64>>>().and_then(|v| mean_std(&v));
            cells.push(SummaryCell {
                family: suite.family.id().into(),
                size,
                method: id.into(),
                mean: stats.map(|s| s.0),
                std: stats.map(|s| s.1),
                diverged,
                n: suite.instances,
                final_regrets: finals,
            });
        }
    }
    Ok(SummaryTable {
        suite: suite_info(suite),
        cells,
    })
}
