//! Single runs driven by a [`SolveConfig`].

use std::fs;
use std::path::{Path, PathBuf};

use super::config::{emit_solve_config, SolveConfig};
use super::metrics::write_metrics_csv;
use crate::error::{Error, Result};
use crate::optim::{run, Iterate, RunOutcome};

pub fn metrics_path(dir: &Path) -> PathBuf {
    dir.join("metrics.csv")
}

/// Runs the solve and writes, under the output directory, `config.toml`,
/// `game.json`, `metrics.csv` and the final strategy: one
/// `player_<i>.json` generator checkpoint per player for MC-GNI, or
/// `iterate.json` holding the joint action vector for the baselines.
pub fn run_solve(config: &SolveConfig) -> Result<RunOutcome> {
    let game = config.game.build()?;
    let dir = &config.output;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let write = |name: &str, text: String| {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))
    };
    write("config.toml", emit_solve_config(config))?;
    game.save(&dir.join("game.json"))?;
    let outcome = run(&config.solver, &game)?;
    write_metrics_csv(outcome.metrics(), &metrics_path(dir))?;
    match &outcome.state.iterate {
        Iterate::Mixed(profile) => {
            for (i, g) in profile.generators.iter().enumerate() {
                g.save(&dir.join(format!("player_{i}.json")))?;
            }
        }
        Iterate::Pure(x) => write("iterate.json", serde_json::to_string(x)?)?,
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::GameInstance;
    use crate::harness::config::parse_solve_config;
    use crate::harness::metrics::read_metrics_csv;
    use crate::pushforward::Generator;

    #[test]
    fn writes_all_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        for (method, files) in [("mcgni", &["player_0.json", "player_1.json"][..]), ("sga", &["iterate.json"][..])] {
            let out = dir.path().join(method);
            let text = format!(
                "[game]\nfamily = \"blotto\"\nm = 2\n[solver]\nmethod = \"{method}\"\niterations = 4\nbatch = 2\n\
                 eval_batch = 4\nhidden = [3]\nactivations = [\"tanh\"]\n[output]\ndir = {:?}\n",
                out.display().to_string()
            );
            let config = parse_solve_config(&text).unwrap();
            let outcome = run_solve(&config).unwrap();
            assert_eq!(read_metrics_csv(&metrics_path(&out)).unwrap().len(), outcome.metrics().len());
            assert_eq!(GameInstance::load(&out.join("game.json")).unwrap(), config.game.build().unwrap());
            for f in files {
                assert!(out.join(f).exists(), "{f}");
            }
            let reparsed = parse_solve_config(&fs::read_to_string(out.join("config.toml")).unwrap()).unwrap();
            assert_eq!(reparsed, config);
        }
        let g = Generator::load(&dir.path().join("mcgni/player_1.json")).unwrap();
        assert_eq!(g.action_dim(), 3);
    }
}
