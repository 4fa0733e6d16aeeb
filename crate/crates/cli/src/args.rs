//! Command-line flags, the optional `key = value` config file, and their
//! resolution into a [`RunSpec`].
//!
//! Precedence: explicit flags override config-file entries, which override
//! the `ACGD_SEED` environment variable (seed only), which overrides the
//! built-in defaults. Unknown or duplicate config keys are usage errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use acgd_core::StrategyKind;

use crate::CliError;

pub const DEFAULT_TOL: f64 = 1e-5;
pub const DEFAULT_MAX_ITER: usize = 3000;
pub const SEED_ENV: &str = "ACGD_SEED";
pub const DEFAULT_CHECKPOINTS: &[usize] = &[10, 100, 1000];

const AFTER_HELP: &str = "\
Config file: plain `key = value` lines (flags override them); `#` starts a
comment. Keys match the long flag names; unknown keys are errors. The
ACGD_SEED environment variable supplies the seed when neither a flag nor
the config file does.

Exit codes: 0 solved or iteration budget reached, 1 solver failure (partial
trace is still written), 2 usage error.";

#[derive(Parser, Debug)]
#[command(
    name = "acgd",
    version,
    about = "Benchmark harness for adaptive conditional gradient solvers",
    after_help = AFTER_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one problem with one step strategy and write the trace CSV.
    Run(RunArgs),
    /// Solve one problem under several strategies and print a summary table.
    Compare(CompareArgs),
    /// Check the worst-case convergence bounds on an instrumented run.
    VerifyRates(VerifyArgs),
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Problem to build: lasso, least-squares, quadratic, simplex-qp,
    /// matrix-balancing, huber-completion, logistic, sigmoid-ls,
    /// rosenbrock, levy, zakharov, sum-of-squares.
    #[arg(long)]
    pub problem: Option<String>,
    /// constrained (oracle steps inside the region) or unconstrained
    /// (normalized steepest descent); each problem has a natural default.
    #[arg(long)]
    pub mode: Option<String>,
    /// Ball geometry: l1, l2, or linf. Picks the steepest-descent geometry
    /// for unconstrained runs and overrides the ball kind for constrained
    /// ball problems.
    #[arg(long)]
    pub lmo: Option<String>,
    /// Ball radius / sparsity level for the problems that take one.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Row count (or synthetic sample count) where the problem takes one.
    #[arg(long)]
    pub m: Option<usize>,
    /// Dimension (or column count) where the problem takes one.
    #[arg(long)]
    pub n: Option<usize>,
    /// Termination tolerance on the convergence criterion.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration budget.
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    /// RNG seed for data generation and the first-step probe.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Initial scale on the local Lipschitz estimate (adaptive family).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Backtracking multiplier (> 1).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Additive salt on Lipschitz estimates (>= 0).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Gamma retune period in iterations (adaptive-adjustable).
    #[arg(long)]
    pub r: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// LIBSVM data file for logistic / sigmoid-ls.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Optional `key = value` config file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Step strategy: adaptive-constant, adaptive-adjustable,
    /// pure-backtracking, short-step, open-loop.
    #[arg(long)]
    pub strategy: Option<String>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Strategies to compare (repeat the flag or separate with commas);
    /// all five when omitted.
    #[arg(long = "strategy", value_delimiter = ',')]
    pub strategy: Vec<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Step strategy covered by the bounds (open-loop is not).
    #[arg(long)]
    pub strategy: Option<String>,
    /// Iteration checkpoints at which the bounds are evaluated.
    #[arg(long)]
    pub checkpoints: Option<String>,
}

/// Problems the harness can build.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProblemId {
    Lasso,
    LeastSquares,
    Quadratic,
    SimplexQp,
    MatrixBalancing,
    HuberCompletion,
    Logistic,
    SigmoidLs,
    Rosenbrock,
    Levy,
    Zakharov,
    SumOfSquares,
}

impl ProblemId {
    pub fn name(self) -> &'static str {
        match self {
            ProblemId::Lasso => "lasso",
            ProblemId::LeastSquares => "least-squares",
            ProblemId::Quadratic => "quadratic",
            ProblemId::SimplexQp => "simplex-qp",
            ProblemId::MatrixBalancing => "matrix-balancing",
            ProblemId::HuberCompletion => "huber-completion",
            ProblemId::Logistic => "logistic",
            ProblemId::SigmoidLs => "sigmoid-ls",
            ProblemId::Rosenbrock => "rosenbrock",
            ProblemId::Levy => "levy",
            ProblemId::Zakharov => "zakharov",
            ProblemId::SumOfSquares => "sum-of-squares",
        }
    }
}

impl FromStr for ProblemId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "lasso" => ProblemId::Lasso,
            "least-squares" => ProblemId::LeastSquares,
            "quadratic" => ProblemId::Quadratic,
            "simplex-qp" => ProblemId::SimplexQp,
            "matrix-balancing" => ProblemId::MatrixBalancing,
            "huber-completion" => ProblemId::HuberCompletion,
            "logistic" => ProblemId::Logistic,
            "sigmoid-ls" => ProblemId::SigmoidLs,
            "rosenbrock" => ProblemId::Rosenbrock,
            "levy" => ProblemId::Levy,
            "zakharov" => ProblemId::Zakharov,
            "sum-of-squares" => ProblemId::SumOfSquares,
            other => {
                return Err(format!(
                    "unknown problem '{other}' (expected lasso, least-squares, quadratic, \
                     simplex-qp, matrix-balancing, huber-completion, logistic, sigmoid-ls, \
                     rosenbrock, levy, zakharov, or sum-of-squares)"
                ))
            }
        })
    }
}

/// Ball geometry selector for `--lmo`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Geom {
    L1,
    L2,
    LInf,
}

impl Geom {
    pub fn name(self) -> &'static str {
        match self {
            Geom::L1 => "l1",
            Geom::L2 => "l2",
            Geom::LInf => "linf",
        }
    }
}

impl FromStr for Geom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "l1" => Geom::L1,
            "l2" => Geom::L2,
            "linf" => Geom::LInf,
            other => return Err(format!("unknown geometry '{other}' (expected l1, l2, or linf)")),
        })
    }
}

/// Explicit mode request; `None` in [`RunSpec`] means the problem default.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModeId {
    Constrained,
    Unconstrained,
}

impl ModeId {
    pub fn name(self) -> &'static str {
        match self {
            ModeId::Constrained => "constrained",
            ModeId::Unconstrained => "unconstrained",
        }
    }
}

impl FromStr for ModeId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "constrained" => ModeId::Constrained,
            "unconstrained" => ModeId::Unconstrained,
            other => {
                return Err(format!(
                    "unknown mode '{other}' (expected constrained or unconstrained)"
                ))
            }
        })
    }
}

/// A fully resolved run: one problem, one strategy, all tuning values.
/// `to_config_string` serializes it in the config-file grammar, so a run is
/// reproducible from the spec alone.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub problem: ProblemId,
    pub strategy: StrategyKind,
    pub mode: Option<ModeId>,
    pub lmo: Option<Geom>,
    pub tau: Option<f64>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub gamma: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub r: Option<usize>,
    pub data: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl RunSpec {
    /// Serialize in the grammar `--config` reads back.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "problem = {}", self.problem.name());
        let _ = writeln!(s, "strategy = {}", self.strategy.name());
        if let Some(mode) = self.mode {
            let _ = writeln!(s, "mode = {}", mode.name());
        }
        if let Some(geom) = self.lmo {
            let _ = writeln!(s, "lmo = {}", geom.name());
        }
        if let Some(tau) = self.tau {
            let _ = writeln!(s, "tau = {tau}");
        }
        if let Some(m) = self.m {
            let _ = writeln!(s, "m = {m}");
        }
        if let Some(n) = self.n {
            let _ = writeln!(s, "n = {n}");
        }
        let _ = writeln!(s, "tol = {}", self.tol);
        let _ = writeln!(s, "max-iter = {}", self.max_iter);
        let _ = writeln!(s, "seed = {}", self.seed);
        if let Some(gamma) = self.gamma {
            let _ = writeln!(s, "gamma = {gamma}");
        }
        if let Some(beta) = self.beta {
            let _ = writeln!(s, "beta = {beta}");
        }
        if let Some(delta) = self.delta {
            let _ = writeln!(s, "delta = {delta}");
        }
        if let Some(r) = self.r {
            let _ = writeln!(s, "r = {r}");
        }
        if let Some(data) = &self.data {
            let _ = writeln!(s, "data = {}", data.display());
        }
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {}", out.display());
        }
        s
    }
}

/// Parsed config file: normalized key -> (value, line number).
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, (String, usize)>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config file {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.split_once('#') {
                Some((before, _)) => before,
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {line_no}: expected `key = value`"))
            })?;
            let key = key.trim().replace('-', "_");
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(CliError::Usage(format!("config line {line_no}: empty key")));
            }
            if value.is_empty() {
                return Err(CliError::Usage(format!(
                    "config line {line_no}: empty value for '{key}'"
                )));
            }
            if let Some((_, first)) = values.get(&key) {
                return Err(CliError::Usage(format!(
                    "config line {line_no}: duplicate key '{key}' (first set on line {first})"
                )));
            }
            values.insert(key, (value, line_no));
        }
        Ok(ConfigFile { values })
    }

    /// Remove and return a key's raw value.
    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.values.remove(key)
    }

    /// Error on any key no subcommand consumed.
    fn finish(self) -> Result<(), CliError> {
        if let Some((key, (_, line))) = self.values.into_iter().next() {
            return Err(CliError::Usage(format!(
                "config line {line}: unknown key '{key}'"
            )));
        }
        Ok(())
    }
}

/// Flag-over-config resolution with typed parsing of config values.
struct Resolver {
    cfg: ConfigFile,
}

impl Resolver {
    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let cfg = match path {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        Ok(Resolver { cfg })
    }

    fn string(&mut self, key: &str, flag: Option<&String>) -> Option<String> {
        flag.cloned().or_else(|| self.cfg.take(key).map(|(v, _)| v))
    }

    fn parsed<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            self.cfg.take(key);
            return Ok(flag);
        }
        match self.cfg.take(key) {
            Some((raw, line)) => raw.parse().map(Some).map_err(|e| {
                CliError::Usage(format!(
                    "config line {line}: invalid value for '{key}': {e}"
                ))
            }),
            None => Ok(None),
        }
    }

    fn path(&mut self, key: &str, flag: Option<&PathBuf>) -> Option<PathBuf> {
        flag.cloned()
            .or_else(|| self.cfg.take(key).map(|(v, _)| PathBuf::from(v)))
    }
}

fn parse_name<T>(what: &str, raw: &str) -> Result<T, CliError>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    raw.parse()
        .map_err(|e| CliError::Usage(format!("invalid {what}: {e}")))
}

fn env_seed(env_val: Option<&str>) -> Result<Option<u64>, CliError> {
    match env_val {
        Some(raw) => raw.trim().parse().map(Some).map_err(|_| {
            CliError::Usage(format!(
                "{SEED_ENV} must be an unsigned integer, got '{raw}'"
            ))
        }),
        None => Ok(None),
    }
}

fn build_spec(
    common: &CommonArgs,
    strategy: Option<&str>,
    r: &mut Resolver,
    env_val: Option<&str>,
) -> Result<RunSpec, CliError> {
    let problem_raw = r
        .string("problem", common.problem.as_ref())
        .ok_or_else(|| {
            CliError::Usage("--problem is required (or `problem = ...` in --config)".to_string())
        })?;
    let problem: ProblemId = parse_name("problem", &problem_raw)?;

    let strategy_raw = strategy
        .map(str::to_string)
        .or_else(|| r.string("strategy", None));
    let strategy: StrategyKind = match strategy_raw {
        Some(raw) => parse_name("strategy", &raw)?,
        None => StrategyKind::AdaptiveConstant,
    };

    let mode = match r.string("mode", common.mode.as_ref()) {
        Some(raw) => Some(parse_name("mode", &raw)?),
        None => None,
    };
    let lmo = match r.string("lmo", common.lmo.as_ref()) {
        Some(raw) => Some(parse_name("geometry", &raw)?),
        None => None,
    };

    let tau = r.parsed("tau", common.tau)?;
    let m = r.parsed("m", common.m)?;
    let n = r.parsed("n", common.n)?;
    let tol = r.parsed("tol", common.tol)?.unwrap_or(DEFAULT_TOL);
    let max_iter = r
        .parsed("max_iter", common.max_iter)?
        .unwrap_or(DEFAULT_MAX_ITER);
    let seed = match r.parsed("seed", common.seed)? {
        Some(s) => s,
        None => env_seed(env_val)?.unwrap_or(0),
    };
    let gamma = r.parsed("gamma", common.gamma)?;
    let beta = r.parsed("beta", common.beta)?;
    let delta = r.parsed("delta", common.delta)?;
    let period = r.parsed("r", common.r)?;
    let data = r.path("data", common.data.as_ref());
    let out = r.path("out", common.out.as_ref());

    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Usage(format!(
            "--tol must be finite and nonnegative, got {tol}"
        )));
    }
    if let Some(tau) = tau {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(CliError::Usage(format!(
                "--tau must be finite and positive, got {tau}"
            )));
        }
    }
    if let Some(g) = gamma {
        if !(g.is_finite() && g > 0.0) {
            return Err(CliError::Usage(format!(
                "--gamma must be finite and positive, got {g}"
            )));
        }
    }
    if let Some(b) = beta {
        if !(b.is_finite() && b > 1.0) {
            return Err(CliError::Usage(format!("--beta must exceed 1, got {b}")));
        }
    }
    if let Some(d) = delta {
        if !(d.is_finite() && d >= 0.0) {
            return Err(CliError::Usage(format!(
                "--delta must be finite and nonnegative, got {d}"
            )));
        }
    }
    if period == Some(0) {
        return Err(CliError::Usage("--r must be at least 1".to_string()));
    }

    Ok(RunSpec {
        problem,
        strategy,
        mode,
        lmo,
        tau,
        m,
        n,
        tol,
        max_iter,
        seed,
        gamma,
        beta,
        delta,
        r: period,
        data,
        out,
    })
}

pub fn resolve_run(args: &RunArgs) -> Result<RunSpec, CliError> {
    resolve_run_with_env(args, std::env::var(SEED_ENV).ok().as_deref())
}

pub fn resolve_run_with_env(
    args: &RunArgs,
    env_val: Option<&str>,
) -> Result<RunSpec, CliError> {
    let mut r = Resolver::load(args.common.config.as_deref())?;
    let spec = build_spec(&args.common, args.strategy.as_deref(), &mut r, env_val)?;
    r.cfg.finish()?;
    Ok(spec)
}

pub fn resolve_compare(args: &CompareArgs) -> Result<(RunSpec, Vec<StrategyKind>), CliError> {
    resolve_compare_with_env(args, std::env::var(SEED_ENV).ok().as_deref())
}

pub fn resolve_compare_with_env(
    args: &CompareArgs,
    env_val: Option<&str>,
) -> Result<(RunSpec, Vec<StrategyKind>), CliError> {
    let mut r = Resolver::load(args.common.config.as_deref())?;
    // The strategy key holds a comma-separated list for this subcommand.
    let raw_list: Vec<String> = if args.strategy.is_empty() {
        match r.cfg.take("strategy") {
            Some((v, _)) => v.split(',').map(|s| s.trim().to_string()).collect(),
            None => ALL_STRATEGIES.iter().map(|k| k.name().to_string()).collect(),
        }
    } else {
        args.strategy.clone()
    };
    let mut kinds = Vec::with_capacity(raw_list.len());
    for raw in &raw_list {
        kinds.push(parse_name::<StrategyKind>("strategy", raw)?);
    }
    if kinds.is_empty() {
        return Err(CliError::Usage("no strategies given".to_string()));
    }
    let spec = build_spec(&args.common, None, &mut r, env_val)?;
    r.cfg.finish()?;
    Ok((spec, kinds))
}

pub const ALL_STRATEGIES: [StrategyKind; 5] = [
    StrategyKind::AdaptiveConstant,
    StrategyKind::AdaptiveAdjustable,
    StrategyKind::PureBacktracking,
    StrategyKind::ShortStep,
    StrategyKind::OpenLoop,
];

pub fn resolve_verify(args: &VerifyArgs) -> Result<(RunSpec, Vec<usize>), CliError> {
    resolve_verify_with_env(args, std::env::var(SEED_ENV).ok().as_deref())
}

pub fn resolve_verify_with_env(
    args: &VerifyArgs,
    env_val: Option<&str>,
) -> Result<(RunSpec, Vec<usize>), CliError> {
    let mut r = Resolver::load(args.common.config.as_deref())?;
    let checkpoints_raw = args
        .checkpoints
        .clone()
        .or_else(|| r.cfg.take("checkpoints").map(|(v, _)| v));
    let checkpoints = match checkpoints_raw {
        Some(raw) => parse_checkpoints(&raw)?,
        None => DEFAULT_CHECKPOINTS.to_vec(),
    };
    let spec = build_spec(&args.common, args.strategy.as_deref(), &mut r, env_val)?;
    r.cfg.finish()?;
    if spec.strategy == StrategyKind::OpenLoop {
        return Err(CliError::Usage(
            "the convergence bounds do not cover open-loop; pick a backtracking or \
             short-step strategy"
                .to_string(),
        ));
    }
    Ok((spec, checkpoints))
}

fn parse_checkpoints(raw: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for part in raw.split(',') {
        let part = part.trim();
        let n: usize = part.parse().map_err(|_| {
            CliError::Usage(format!("invalid checkpoint '{part}' (expected an integer)"))
        })?;
        if n == 0 {
            return Err(CliError::Usage("checkpoints must be at least 1".to_string()));
        }
        out.push(n);
    }
    if out.is_empty() {
        return Err(CliError::Usage("no checkpoints given".to_string()));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
