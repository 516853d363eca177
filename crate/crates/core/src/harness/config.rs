//! TOML configuration for single solves and benchmark suites.
//!
//! Both documents share a `[solver]` section; every key is optional and
//! falls back to the defaults of [`SolverConfig`]. A solve document adds a
//! `[game]` section, a suite document adds `[suite]` and optional
//! per-method `[methods.<id>]` overrides layered on top of `[solver]`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use toml::Table;

use crate::error::{Error, Result};
use crate::games::{gen_blotto, gen_gamut, gen_quadratic, EntryDist, GameInstance};
use crate::mcgni::GradMode;
use crate::optim::{Method, SolverConfig};
use crate::pushforward::{Activation, Architecture, GeneratorKind};

const SOLVER_KEYS: &[&str] = &[
    "method",
    "lambda",
    "rho",
    "kappa",
    "iterations",
    "batch",
    "eval_batch",
    "grad_mode",
    "hvp_eps",
    "generator",
    "hidden",
    "activations",
    "latent_dim",
    "lambda_sga",
    "fd_eps",
    "seed",
    "init_seed",
    "batch_seed",
    "eval_seed",
    "regret_every",
    "snp_every",
    "timing",
];
const GAME_KEYS: &[&str] = &["family", "n_i", "m", "players", "dist", "seed", "path"];
const OUTPUT_KEYS: &[&str] = &["dir"];
const SUITE_KEYS: &[&str] = &["family", "sizes", "instances", "seed", "methods", "players", "dist", "output"];

/// Default number of instances per suite size.
pub const DEFAULT_INSTANCES: usize = 10;
/// Default player count for the multi-player family.
pub const DEFAULT_PLAYERS: usize = 4;

/// Key reference printed by `--help`.
pub const SCHEMA_HELP: &str = "\
[solver]            shared by `solve` and `bench`; every key optional
  method        = \"mcgni\"       mcgni | gradgni | sga
  lambda        = 1e-3          local radius
  rho           = 1e-2          step size
  kappa         = 0.9           momentum, in [0, 1)
  iterations    = 2000
  batch         = 128           training samples per player and iteration
  eval_batch    = 1024          fixed samples for the reported regret
  grad_mode     = \"exact\"       exact | first_order (mcgni and gradgni)
  hvp_eps       = 1e-4          relative finite-difference step for HVPs
  generator     = \"net\"         net | constant
  hidden        = [20, 40, 160, 160, 40, 20]
  activations   = [\"tanh\", \"tanh\", \"tanh\", \"relu\", \"tanh\", \"tanh\"]
  latent_dim    = n_i           defaults to each player's action dimension
  lambda_sga    = 1.0           SGA adjustment weight
  fd_eps        = 1e-5          relative step of the SGA Jacobian
  seed          = 0             sets init_seed, batch_seed and eval_seed
  init_seed, batch_seed, eval_seed   override `seed` individually
  regret_every  = 1             local regret cadence (first and last rows always)
  snp_every     = 50            SNP residual cadence
  timing        = false         fill the elapsed_ms column

[game]              `solve` only
  family        = \"quadratic\"   quadratic | blotto | gamut | file
  n_i           = 3             actions per player (quadratic, gamut)
  m             = 3             battlefields (blotto)
  players       = 4             (gamut)
  dist          = \"uniform01\"   uniform01 | uniform_sym | normal | exponential | ternary
  seed          = 0
  path          = \"game.json\"   (file)

[output]            `solve` only
  dir           = \"solve-out\"

[suite]             `bench` only
  family        = \"quadratic\"   quadratic | blotto | gamut
  sizes         = [3]           n_i for quadratic and gamut, m for blotto
  instances     = 10
  seed          = 0             instance j uses game seed `seed + j`
  methods       = [\"mcgni\", \"gradgni\", \"sga\"]
  players       = 4             (gamut)
  dist          = \"uniform01\"   quadratic default; gamut defaults to \"mixed\"
  output        = \"bench-out\"

[methods.<id>]      `bench` only; per-method [solver] overrides
";

/// All `[solver]` keys, each optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
struct RawSolver {
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    batch: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eval_batch: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grad_mode: Option<GradMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hvp_eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<GeneratorChoice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hidden: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    activations: Option<Vec<Activation>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    latent_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_sga: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fd_eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    init_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    batch_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eval_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    regret_every: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    snp_every: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum GeneratorChoice {
    Net,
    Constant,
}

impl RawSolver {
    /// Keys set in `over` win.
    fn layered(&self, over: &RawSolver) -> RawSolver {
        macro_rules! pick {
            ($($f:ident),*) => { RawSolver { $($f: over.$f.clone().or_else(|| self.$f.clone())),* } };
        }
        let mut out = pick!(
            method, lambda, rho, kappa, iterations, batch, eval_batch, grad_mode, hvp_eps, generator, hidden,
            activations, latent_dim, lambda_sga, fd_eps, seed, init_seed, batch_seed, eval_seed, regret_every,
            snp_every, timing
        );
        // A blanket seed in the override beats specific seeds from below.
        if over.seed.is_some() {
            out.init_seed = over.init_seed;
            out.batch_seed = over.batch_seed;
            out.eval_seed = over.eval_seed;
        }
        out
    }

    fn build(&self) -> Result<SolverConfig> {
        let d = SolverConfig::default();
        let seed = self.seed.unwrap_or(0);
        let generator = match self.generator.unwrap_or(GeneratorChoice::Net) {
            GeneratorChoice::Constant => {
                if self.hidden.is_some() || self.activations.is_some() {
                    return Err(Error::invalid("hidden", "only applies to generator = \"net\""));
                }
                GeneratorKind::Constant
            }
            GeneratorChoice::Net => {
                let standard = Architecture::standard();
                GeneratorKind::Net(Architecture::new(
                    self.hidden.clone().unwrap_or(standard.hidden),
                    self.activations.clone().unwrap_or(standard.activations),
                )?)
            }
        };
        let mut mcgni = d.mcgni.clone();
        mcgni.lambda = self.lambda.unwrap_or(mcgni.lambda);
        mcgni.batch = self.batch.unwrap_or(mcgni.batch);
        mcgni.eval_batch = self.eval_batch.unwrap_or(mcgni.eval_batch);
        mcgni.grad_mode = self.grad_mode.unwrap_or(mcgni.grad_mode);
        mcgni.hvp_eps = self.hvp_eps.unwrap_or(mcgni.hvp_eps);
        mcgni.eval_seed = self.eval_seed.unwrap_or(seed);
        let config = SolverConfig {
            method: self.method.unwrap_or(d.method),
            rho: self.rho.unwrap_or(d.rho),
            kappa: self.kappa.unwrap_or(d.kappa),
            iterations: self.iterations.unwrap_or(d.iterations),
            mcgni,
            generator,
            latent_dim: self.latent_dim.or(d.latent_dim),
            lambda_sga: self.lambda_sga.unwrap_or(d.lambda_sga),
            fd_eps: self.fd_eps.unwrap_or(d.fd_eps),
            init_seed: self.init_seed.unwrap_or(seed),
            batch_seed: self.batch_seed.unwrap_or(seed),
            regret_every: self.regret_every.unwrap_or(d.regret_every),
            snp_every: self.snp_every.unwrap_or(d.snp_every),
            timing: self.timing.unwrap_or(d.timing),
        };
        config.validate()?;
        Ok(config)
    }

    fn canonical(c: &SolverConfig) -> RawSolver {
        let (generator, hidden, activations) = match &c.generator {
            GeneratorKind::Constant => (GeneratorChoice::Constant, None, None),
            GeneratorKind::Net(a) => (GeneratorChoice::Net, Some(a.hidden.clone()), Some(a.activations.clone())),
        };
        RawSolver {
            method: Some(c.method),
            lambda: Some(c.mcgni.lambda),
            rho: Some(c.rho),
            kappa: Some(c.kappa),
            iterations: Some(c.iterations),
            batch: Some(c.mcgni.batch),
            eval_batch: Some(c.mcgni.eval_batch),
            grad_mode: Some(c.mcgni.grad_mode),
            hvp_eps: Some(c.mcgni.hvp_eps),
            generator: Some(generator),
            hidden,
            activations,
            latent_dim: c.latent_dim,
            lambda_sga: Some(c.lambda_sga),
            fd_eps: Some(c.fd_eps),
            seed: None,
            init_seed: Some(c.init_seed),
            batch_seed: Some(c.batch_seed),
            eval_seed: Some(c.mcgni.eval_seed),
            regret_every: Some(c.regret_every),
            snp_every: Some(c.snp_every),
            timing: Some(c.timing),
        }
    }
}

/// How a game is obtained for a single solve.
#[derive(Clone, Debug, PartialEq)]
pub enum GameSpec {
    Quadratic { n_i: usize, dist: EntryDist, seed: u64 },
    Blotto { m: usize, seed: u64 },
    Gamut { players: usize, n_i: usize, dist: EntryDist, seed: u64 },
    File { path: PathBuf },
}

impl GameSpec {
    pub fn build(&self) -> Result<GameInstance> {
        Ok(match self {
            GameSpec::Quadratic { n_i, dist, seed } => gen_quadratic(*seed, *n_i, *dist),
            GameSpec::Blotto { m, seed } => gen_blotto(*seed, *m),
            GameSpec::Gamut { players, n_i, dist, seed } => gen_gamut(*seed, *players, *n_i, *dist),
            GameSpec::File { path } => GameInstance::load(path)?,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
struct RawGame {
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    players: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dist: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<PathBuf>,
}

fn positive(field: &'static str, v: Option<usize>, default: usize) -> Result<usize> {
    match v.unwrap_or(default) {
        0 => Err(Error::invalid(field, "must be at least 1")),
        v => Ok(v),
    }
}

impl RawGame {
    fn build(self) -> Result<GameSpec> {
        let family = self.family.as_deref().unwrap_or("quadratic");
        let seed = self.seed.unwrap_or(0);
        let dist = || -> Result<EntryDist> { self.dist.as_deref().unwrap_or("uniform01").parse() };
        let only = |allowed: &[&str]| -> Result<()> {
            let set = [
                ("n_i", self.n_i.is_some()),
                ("m", self.m.is_some()),
                ("players", self.players.is_some()),
                ("dist", self.dist.is_some()),
                ("path", self.path.is_some()),
            ];
            match set.iter().find(|(k, on)| *on && !allowed.contains(k)) {
                Some((k, _)) => Err(Error::invalid("game", format!("`{k}` does not apply to family `{family}`"))),
                None => Ok(()),
            }
        };
        match family {
            "quadratic" => {
                only(&["n_i", "dist"])?;
                Ok(GameSpec::Quadratic { n_i: positive("n_i", self.n_i, 3)?, dist: dist()?, seed })
            }
            "blotto" => {
                only(&["m"])?;
                Ok(GameSpec::Blotto { m: positive("m", self.m, 3)?, seed })
            }
            "gamut" => {
                only(&["n_i", "players", "dist"])?;
                Ok(GameSpec::Gamut {
                    players: positive("players", self.players, DEFAULT_PLAYERS)?,
                    n_i: positive("n_i", self.n_i, 3)?,
                    dist: dist()?,
                    seed,
                })
            }
            "file" => {
                only(&["path"])?;
                let path = self.path.ok_or_else(|| Error::invalid("path", "required for family = \"file\""))?;
                Ok(GameSpec::File { path })
            }
            other => Err(Error::invalid("family", format!("unknown game family `{other}`"))),
        }
    }

    fn canonical(spec: &GameSpec) -> RawGame {
        let mut raw = RawGame::default();
        match spec {
            GameSpec::Quadratic { n_i, dist, seed } => {
                raw.family = Some("quadratic".into());
                raw.n_i = Some(*n_i);
                raw.dist = Some(dist.id().into());
                raw.seed = Some(*seed);
            }
            GameSpec::Blotto { m, seed } => {
                raw.family = Some("blotto".into());
                raw.m = Some(*m);
                raw.seed = Some(*seed);
            }
            GameSpec::Gamut { players, n_i, dist, seed } => {
                raw.family = Some("gamut".into());
                raw.players = Some(*players);
                raw.n_i = Some(*n_i);
                raw.dist = Some(dist.id().into());
                raw.seed = Some(*seed);
            }
            GameSpec::File { path } => {
                raw.family = Some("file".into());
                raw.path = Some(path.clone());
            }
        }
        raw
    }
}

/// A single `solve` run.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveConfig {
    pub game: GameSpec,
    pub solver: SolverConfig,
    pub output: PathBuf,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawSolveDoc {
    game: Option<RawGame>,
    #[serde(default)]
    solver: RawSolver,
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawOutput {
    dir: Option<PathBuf>,
}

/// Game family of a benchmark suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Quadratic,
    Blotto,
    Gamut,
}

impl Family {
    pub fn id(self) -> &'static str {
        match self {
            Family::Quadratic => "quadratic",
            Family::Blotto => "blotto",
            Family::Gamut => "gamut",
        }
    }
}

/// Entry distribution of a suite: fixed, or drawn per instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistChoice {
    Fixed(EntryDist),
    Mixed,
}

impl DistChoice {
    pub fn id(self) -> &'static str {
        match self {
            DistChoice::Fixed(d) => d.id(),
            DistChoice::Mixed => "mixed",
        }
    }
}

/// A method run within a suite, with its fully resolved solver settings.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodRun {
    pub method: Method,
    pub solver: SolverConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub instances: usize,
    pub seed: u64,
    pub players: usize,
    pub dist: DistChoice,
    pub output: PathBuf,
    pub methods: Vec<MethodRun>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawSuiteDoc {
    suite: Option<RawSuite>,
    #[serde(default)]
    solver: RawSolver,
    #[serde(default)]
    methods: std::collections::BTreeMap<String, RawSolver>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct RawSuite {
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    instances: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    methods: Option<Vec<Method>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    players: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dist: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<PathBuf>,
}

// Dotted paths of every key not in the schema.
fn unknown_keys(doc: &Table, sections: &[(&str, &[&str])], open_section: Option<&str>) -> Vec<String> {
    let mut unknown = Vec::new();
    let check = |prefix: &str, value: &toml::Value, known: &[&str], unknown: &mut Vec<String>| match value {
        toml::Value::Table(t) => {
            for k in t.keys().filter(|k| !known.contains(&k.as_str())) {
                unknown.push(format!("{prefix}.{k}"));
            }
        }
        _ => unknown.push(prefix.to_string()),
    };
    for (key, value) in doc {
        if let Some((_, known)) = sections.iter().find(|(s, _)| s == key) {
            check(key, value, known, &mut unknown);
        } else if open_section == Some(key.as_str()) {
            match value {
                toml::Value::Table(t) => {
                    for (sub, v) in t {
                        check(&format!("{key}.{sub}"), v, SOLVER_KEYS, &mut unknown);
                    }
                }
                _ => unknown.push(key.clone()),
            }
        } else {
            unknown.push(key.clone());
        }
    }
    unknown
}

fn parse_table(text: &str) -> Result<Table> {
    text.parse::<Table>().map_err(|e| Error::ConfigParse(e.to_string()))
}

fn typed<T: serde::de::DeserializeOwned>(table: Table) -> Result<T> {
    T::deserialize(toml::Value::Table(table)).map_err(|e| Error::ConfigParse(e.to_string()))
}

fn to_toml<T: Serialize>(value: &T) -> String {
    toml::to_string(value).expect("config documents are plain tables")
}

/// Parses a `solve` document.
pub fn parse_solve_config(text: &str) -> Result<SolveConfig> {
    let table = parse_table(text)?;
    let unknown = unknown_keys(
        &table,
        &[("game", GAME_KEYS), ("solver", SOLVER_KEYS), ("output", OUTPUT_KEYS)],
        None,
    );
    if !unknown.is_empty() {
        return Err(Error::UnknownKeys(unknown));
    }
    let raw: RawSolveDoc = typed(table)?;
    let game = raw
        .game
        .ok_or_else(|| Error::invalid("game", "missing required [game] section"))?
        .build()?;
    Ok(SolveConfig {
        game,
        solver: raw.solver.build()?,
        output: raw.output.and_then(|o| o.dir).unwrap_or_else(|| PathBuf::from("solve-out")),
    })
}

/// Parses a `[solver]`-only document, or the `[solver]` section of any document
/// that has nothing else.
pub fn parse_solver_config(text: &str) -> Result<SolverConfig> {
    let table = parse_table(text)?;
    let unknown = unknown_keys(&table, &[("solver", SOLVER_KEYS)], None);
    if !unknown.is_empty() {
        return Err(Error::UnknownKeys(unknown));
    }
    #[derive(Deserialize)]
    struct Doc {
        #[serde(default)]
        solver: RawSolver,
    }
    typed::<Doc>(table)?.solver.build()
}

/// Parses a `bench` document.
pub fn parse_suite_config(text: &str) -> Result<SuiteConfig> {
    let table = parse_table(text)?;
    let unknown = unknown_keys(&table, &[("suite", SUITE_KEYS), ("solver", SOLVER_KEYS)], Some("methods"));
    if !unknown.is_empty() {
        return Err(Error::UnknownKeys(unknown));
    }
    let raw: RawSuiteDoc = typed(table)?;
    let suite = raw
        .suite
        .ok_or_else(|| Error::invalid("suite", "missing required [suite] section"))?;
    let family = suite.family.unwrap_or(Family::Quadratic);
    let sizes = suite.sizes.unwrap_or_else(|| vec![3]);
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::invalid("sizes", "must be a non-empty list of positive sizes"));
    }
    let instances = positive("instances", suite.instances, DEFAULT_INSTANCES)?;
    let players = positive("players", suite.players, DEFAULT_PLAYERS)?;
    let dist = match (family, suite.dist.as_deref()) {
        (Family::Blotto, Some(_)) => return Err(Error::invalid("dist", "does not apply to blotto suites")),
        (Family::Gamut, None) | (_, Some("mixed")) => DistChoice::Mixed,
        (_, None) => DistChoice::Fixed(EntryDist::Uniform01),
        (_, Some(id)) => DistChoice::Fixed(id.parse()?),
    };
    let methods = suite.methods.unwrap_or_else(|| Method::ALL.to_vec());
    if methods.is_empty() {
        return Err(Error::invalid("methods", "must list at least one method"));
    }
    for (i, m) in methods.iter().enumerate() {
        if methods[..i].contains(m) {
            return Err(Error::invalid("methods", format!("`{m}` listed twice")));
        }
    }
    for id in raw.methods.keys() {
        let m: Method = id.parse()?;
        if !methods.contains(&m) {
            return Err(Error::invalid("methods", format!("override for `{id}`, which is not run")));
        }
    }
    let methods = methods
        .into_iter()
        .map(|method| {
            let layered = raw.solver.layered(raw.methods.get(method.id()).unwrap_or(&RawSolver::default()));
            if layered.method.is_some_and(|m| m != method) {
                return Err(Error::invalid("method", "set by [suite].methods, not in solver sections"));
            }
            let mut solver = layered.build()?;
            solver.method = method;
            Ok(MethodRun { method, solver })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteConfig {
        family,
        sizes,
        instances,
        seed: suite.seed.unwrap_or(0),
        players,
        dist,
        output: suite.output.unwrap_or_else(|| PathBuf::from("bench-out")),
        methods,
    })
}

/// Canonical TOML form of a solve config; parses back to an equal value.
pub fn emit_solve_config(c: &SolveConfig) -> String {
    to_toml(&RawSolveDoc {
        game: Some(RawGame::canonical(&c.game)),
        solver: RawSolver::canonical(&c.solver),
        output: Some(RawOutput { dir: Some(c.output.clone()) }),
    })
}

/// Canonical TOML form of a solver config.
pub fn emit_solver_config(c: &SolverConfig) -> String {
    #[derive(Serialize)]
    struct Doc {
        solver: RawSolver,
    }
    to_toml(&Doc {
        solver: RawSolver::canonical(c),
    })
}

/// Canonical TOML form of a suite config; parses back to an equal value.
pub fn emit_suite_config(c: &SuiteConfig) -> String {
    let suite = RawSuite {
        family: Some(c.family),
        sizes: Some(c.sizes.clone()),
        instances: Some(c.instances),
        seed: Some(c.seed),
        methods: Some(c.methods.iter().map(|m| m.method).collect()),
        players: Some(c.players),
        dist: (c.family != Family::Blotto).then(|| c.dist.id().to_string()),
        output: Some(c.output.clone()),
    };
    let methods = c
        .methods
        .iter()
        .map(|m| {
            let mut raw = RawSolver::canonical(&m.solver);
            raw.method = None;
            (m.method.id().to_string(), raw)
        })
        .collect();
    to_toml(&RawSuiteDoc {
        suite: Some(suite),
        solver: RawSolver::default(),
        methods,
    })
}
