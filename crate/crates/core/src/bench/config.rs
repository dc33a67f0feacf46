use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::adversaries::{
    affine_trap_environments, sampled_trap_environments, motzkin_environments, AffineTrap, BaseLoss, ExpertInstance,
    GraphInstance, HybridLogT, Oblivious, StochasticAdversary, StochasticPrior, VertexWorstCase, ZeroGradient,
};
use crate::error::{ConfigIssue, Error, Result};
use crate::game::{Adversary, Environment, GameConfig, MixturePlay, ParamSpace, Player, PolynomialRisk, QuadraticRisk, Region};
use crate::optim::{forceable_gradient_g, GlobalSearch, RateConstants};
use crate::players::{BestResponse, Ftl, Ftpl, Minimax, Ogd, StepSchedule};
use crate::tolerance::Tolerances;

/// A complete experiment description, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub horizon: usize,
    pub seeds: Vec<u64>,
    /// Output directory, relative to the output root.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub space: ParamSpace,
    pub region: Region,
    pub environments: EnvironmentsSpec,
    pub player: PlayerSpec,
    pub adversary: AdversarySpec,
    #[serde(default)]
    pub hindsight: SearchSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub report: ReportSpec,
    /// Directory that relative file references resolve against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvironmentsSpec {
    Quadratic { items: Vec<QuadraticSpec> },
    /// Univariate polynomials on a 1-D box.
    Polynomial { items: Vec<PolynomialSpec> },
    AffineTrap { alpha: f64 },
    /// The trap pair realized as finite sample distributions.
    SampledTrap { alpha: f64 },
    Motzkin { graph: String, alpha: f64 },
    Experts {
        experts: usize,
        rounds: usize,
        alpha: f64,
        loss: BaseLoss,
        #[serde(default)]
        seed: u64,
    },
}

/// `½(β − μ)ᵀQ(β − μ) + c`; `scale` is shorthand for `Q = 2·scale·I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    pub mu: Vec<f64>,
    #[serde(default)]
    pub c: f64,
    /// Gradient bound on `B`; computed from the space when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lipschitz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialSpec {
    /// Ascending degree.
    pub coefficients: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lipschitz: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
}

impl SearchSpec {
    pub fn search(&self) -> GlobalSearch {
        match (self.grid_step, self.starts) {
            (Some(step), _) => GlobalSearch::Grid { step },
            (None, Some(starts)) => GlobalSearch::MultiStart { starts },
            (None, None) => GlobalSearch::Auto,
        }
    }

    fn check(&self, path: &str, dim: usize, issues: &mut Vec<ConfigIssue>) {
        if let Some(step) = self.grid_step {
            if !(step > 0.0) {
                issues.push(ConfigIssue::new(format!("{path}.grid_step"), "must be positive"));
            } else if dim > 3 {
                issues.push(ConfigIssue::new(
                    format!("{path}.grid_step"),
                    format!("grid search is limited to dimension 3 (space has {dim}); use `starts`"),
                ));
            }
        }
        if self.starts == Some(0) {
            issues.push(ConfigIssue::new(format!("{path}.starts"), "must be at least 1"));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PlayerSpec {
    Ftl {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial: Option<Vec<f64>>,
        #[serde(default)]
        oracle: SearchSpec,
    },
    Ftpl {
        /// Perturbation rate; `√T/D` when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eta: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial: Option<Vec<f64>>,
        #[serde(default)]
        oracle: SearchSpec,
    },
    Ogd {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial: Option<Vec<f64>>,
        #[serde(default)]
        schedule: StepSchedule,
    },
    Minimax {
        #[serde(default)]
        oracle: SearchSpec,
    },
    BestResponse {
        #[serde(default)]
        oracle: SearchSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AdversarySpec {
    VertexWorstCase,
    ZeroGradient,
    HybridLogt,
    /// Uses the region's `alpha` unless given.
    AffineTrap {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
    },
    /// The same `λ` every round; defaults to `(1+α, −α)` for Motzkin pairs.
    Constant {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda: Option<Vec<f64>>,
    },
    /// Fresh i.i.d. draw each round.
    Stochastic { support: Vec<Vec<f64>>, weights: Vec<f64> },
    /// Whole sequence drawn from the prior before play, keyed by the run seed.
    Oblivious { support: Vec<Vec<f64>>, weights: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportSpec {
    /// Log-spaced regret checkpoints for the rate fit.
    pub checkpoints: usize,
    /// First round used by the rate fit.
    pub fit_from: usize,
}

impl Default for ReportSpec {
    fn default() -> Self {
        ReportSpec {
            checkpoints: 30,
            fit_from: super::FIT_FROM,
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("scenario", e.to_string().trim_end()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), format!("cannot read: {e}")))?;
        let mut config: ScenarioConfig = toml::from_str(&text)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string().trim_end()))?;
        config.base_dir = path.parent().map(Path::to_path_buf);
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario configs serialize")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("scenario configs serialize")
    }

    /// Output directory under `root`.
    pub fn output_dir(&self, root: &Path) -> PathBuf {
        root.join(self.output.clone().unwrap_or_else(|| PathBuf::from(&self.name)))
    }

    pub fn game_config(&self, seed: u64) -> GameConfig {
        GameConfig::new(self.horizon, seed, self.region)
            .with_tolerances(self.tolerances)
            .with_hindsight(self.hindsight.search())
    }

    fn resolve(&self, file: &str) -> PathBuf {
        let p = PathBuf::from(file);
        match &self.base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p,
        }
    }

    /// Everything needed to run, checked up front; every problem found is
    /// reported with its field path.
    pub fn build(&self) -> Result<Scenario> {
        let scenario = self.build_for_check()?;
        if scenario.experts.is_some() {
            return Err(Error::Invalid(vec![ConfigIssue::new(
                "environments.kind",
                "expert instances change environments every round; use `check`, not `run`",
            )]));
        }
        Ok(scenario)
    }

    /// Like [`build`](Self::build) but also accepts expert instances, for identity checks.
    pub fn build_for_check(&self) -> Result<Scenario> {
        let mut issues = Vec::new();
        if self.name.trim().is_empty() {
            issues.push(ConfigIssue::new("name", "must not be empty"));
        }
        if self.horizon == 0 {
            issues.push(ConfigIssue::new("horizon", "must be at least 1"));
        }
        if self.seeds.is_empty() {
            issues.push(ConfigIssue::new("seeds", "list at least one seed"));
        }
        if let Err(e) = self.space.validate() {
            issues.push(ConfigIssue::new("space", e.to_string()));
            return Err(Error::Invalid(issues));
        }
        if let Region::Affine { alpha } = self.region {
            if !(alpha > 0.0 && alpha.is_finite()) {
                issues.push(ConfigIssue::new("region.alpha", "must be positive"));
            }
        }
        let dim = self.space.dim();
        self.hindsight.check("hindsight", dim, &mut issues);
        if self.report.checkpoints < 3 {
            issues.push(ConfigIssue::new("report.checkpoints", "need at least 3"));
        }

        let (envs, experts) = match self.environments(&mut issues) {
            Some(built) => built,
            None => return Err(Error::Invalid(issues)),
        };
        for (i, env) in envs.iter().enumerate() {
            if env.dim() != dim {
                issues.push(ConfigIssue::new(
                    format!("environments.items[{i}]"),
                    format!("dimension {} does not match the space ({dim})", env.dim()),
                ));
            }
        }
        self.check_player(dim, &mut issues);
        self.check_adversary(&envs, &mut issues);
        if !issues.is_empty() {
            return Err(Error::Invalid(issues));
        }
        Ok(Scenario {
            config: self.clone(),
            space: self.space.clone(),
            envs,
            experts,
        })
    }

    fn environments(&self, issues: &mut Vec<ConfigIssue>) -> Option<(Vec<Environment>, Option<ExpertInstance>)> {
        let mut fail = |path: &str, e: Error| {
            issues.push(ConfigIssue::new(path, e.to_string()));
            None
        };
        match &self.environments {
            EnvironmentsSpec::Quadratic { items } => {
                if items.is_empty() {
                    return fail("environments.items", Error::InvalidInput("list at least one environment".into()));
                }
                let mut envs = Vec::new();
                for (i, item) in items.iter().enumerate() {
                    match quadratic_environment(i, item, &self.space) {
                        Ok(env) => envs.push(env),
                        Err(e) => return fail(&format!("environments.items[{i}]"), e),
                    }
                }
                Some((envs, None))
            }
            EnvironmentsSpec::Polynomial { items } => {
                let (lo, hi) = match &self.space {
                    ParamSpace::Box { lo, hi } if lo.len() == 1 => (lo[0], hi[0]),
                    _ => {
                        return fail(
                            "space",
                            Error::InvalidInput("polynomial environments need a 1-D box".into()),
                        )
                    }
                };
                if items.is_empty() {
                    return fail("environments.items", Error::InvalidInput("list at least one environment".into()));
                }
                let mut envs = Vec::new();
                for (i, item) in items.iter().enumerate() {
                    let built = PolynomialRisk::new(item.coefficients.clone()).and_then(|p| {
                        let (smin, smax, lip) = p.interval_bounds(lo, hi);
                        if !(smin > 0.0) {
                            return Err(Error::InvalidInput(format!(
                                "not strongly convex on B (smallest curvature {smin:.3e})"
                            )));
                        }
                        Ok(Environment::custom(i, p, smin, smax)?.with_lipschitz_bound(item.lipschitz.unwrap_or(lip)))
                    });
                    match built {
                        Ok(env) => envs.push(env),
                        Err(e) => return fail(&format!("environments.items[{i}]"), e),
                    }
                }
                Some((envs, None))
            }
            EnvironmentsSpec::AffineTrap { alpha } => match affine_trap_environments(*alpha, &self.space) {
                Ok(envs) => Some((envs, None)),
                Err(e) => fail("environments", e),
            },
            EnvironmentsSpec::SampledTrap { alpha } => match sampled_trap_environments(*alpha, &self.space) {
                Ok(envs) => Some((envs, None)),
                Err(e) => fail("environments", e),
            },
            EnvironmentsSpec::Motzkin { graph, alpha } => {
                let g = match self.graph(graph) {
                    Ok(g) => g,
                    Err(e) => return fail("environments.graph", e),
                };
                if self.space != (ParamSpace::Simplex { dim: g.n() }) {
                    return fail(
                        "space",
                        Error::InvalidInput(format!("the Motzkin game is played on the simplex of dimension {}", g.n())),
                    );
                }
                match motzkin_environments(&g, *alpha) {
                    Ok(envs) => Some((envs, None)),
                    Err(e) => fail("environments", e),
                }
            }
            EnvironmentsSpec::Experts {
                experts,
                rounds,
                alpha,
                loss,
                seed,
            } => {
                let inst = match ExpertInstance::random(*experts, *rounds, *alpha, *loss, *seed) {
                    Ok(i) => i,
                    Err(e) => return fail("environments", e),
                };
                if self.space != (ParamSpace::Simplex { dim: *experts }) {
                    return fail(
                        "space",
                        Error::InvalidInput(format!("expert weights live on the simplex of dimension {experts}")),
                    );
                }
                match crate::adversaries::expert_reduction_envs(&inst, 1) {
                    Ok((a, b, _)) => Some((vec![a, b], Some(inst))),
                    Err(e) => fail("environments", e),
                }
            }
        }
    }

    /// Built-in graphs (`petersen`, `path:N`, `cycle:N`, `complete:N`,
    /// `empty:N`, `random:N:P:SEED`) or a graph file.
    fn graph(&self, source: &str) -> Result<GraphInstance> {
        let parts: Vec<&str> = source.split(':').collect();
        let count = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("`{s}` is not a vertex count")))
        };
        match parts.as_slice() {
            ["petersen"] => Ok(GraphInstance::petersen()),
            ["path", n] => GraphInstance::path(count(n)?),
            ["cycle", n] => GraphInstance::cycle(count(n)?),
            ["complete", n] => GraphInstance::complete(count(n)?),
            ["empty", n] => GraphInstance::empty(count(n)?),
            ["random", n, p, seed] => {
                let p: f64 = p
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("`{p}` is not a probability")))?;
                let seed: u64 = seed
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("`{seed}` is not a seed")))?;
                GraphInstance::random(count(n)?, p, seed)
            }
            _ => {
                let path = self.resolve(source);
                if !path.exists() {
                    return Err(Error::InvalidInput(format!("graph file {} does not exist", path.display())));
                }
                GraphInstance::from_file(&path)
            }
        }
    }

    fn check_player(&self, dim: usize, issues: &mut Vec<ConfigIssue>) {
        let initial = match &self.player {
            PlayerSpec::Ftl { initial, oracle } => {
                oracle.check("player.oracle", dim, issues);
                initial
            }
            PlayerSpec::Ftpl { eta, initial, oracle } => {
                oracle.check("player.oracle", dim, issues);
                if let Some(eta) = eta {
                    if !(*eta > 0.0) {
                        issues.push(ConfigIssue::new("player.eta", "must be positive"));
                    }
                }
                initial
            }
            PlayerSpec::Ogd { initial, schedule } => {
                let ok = match *schedule {
                    StepSchedule::StronglyConvex { sigma } => sigma.is_none_or(|s| s > 0.0),
                    StepSchedule::Constant { step } => step > 0.0,
                    StepSchedule::InverseSqrt { scale } => scale > 0.0,
                };
                if !ok {
                    issues.push(ConfigIssue::new("player.schedule", "step parameters must be positive"));
                }
                initial
            }
            PlayerSpec::Minimax { oracle } | PlayerSpec::BestResponse { oracle } => {
                oracle.check("player.oracle", dim, issues);
                &None
            }
        };
        if let Some(b) = initial {
            if b.len() != dim {
                issues.push(ConfigIssue::new(
                    "player.initial",
                    format!("has {} entries, space has dimension {dim}", b.len()),
                ));
            } else if !self.space.contains(b, 1e-12) {
                issues.push(ConfigIssue::new("player.initial", "lies outside the space"));
            }
        }
    }

    fn check_adversary(&self, envs: &[Environment], issues: &mut Vec<ConfigIssue>) {
        let e = envs.len();
        let affine_only = |what: &str, issues: &mut Vec<ConfigIssue>| {
            if self.region == Region::Convex {
                issues.push(ConfigIssue::new(
                    "adversary.kind",
                    format!("{what} plays affine coefficients but the region is convex"),
                ));
            }
        };
        match &self.adversary {
            AdversarySpec::VertexWorstCase | AdversarySpec::ZeroGradient => {}
            AdversarySpec::HybridLogt => {
                if self.region != Region::Convex {
                    issues.push(ConfigIssue::new("adversary.kind", "hybrid_logt assumes the convex region"));
                }
            }
            AdversarySpec::AffineTrap { alpha } => {
                affine_only("affine_trap", issues);
                if !matches!(
                    self.environments,
                    EnvironmentsSpec::AffineTrap { .. } | EnvironmentsSpec::SampledTrap { .. }
                ) {
                    issues.push(ConfigIssue::new(
                        "adversary.kind",
                        "affine_trap needs affine_trap or sampled_trap environments",
                    ));
                }
                if let (Some(a), Region::Affine { alpha: r }) = (alpha, self.region) {
                    if *a > r {
                        issues.push(ConfigIssue::new("adversary.alpha", format!("exceeds the region's alpha {r}")));
                    }
                }
            }
            AdversarySpec::Constant { lambda } => match (lambda, self.motzkin_alpha()) {
                (Some(l), _) => self.check_play("adversary.lambda", l, e, issues),
                (None, Some(_)) => affine_only("the Motzkin pair", issues),
                (None, None) => issues.push(ConfigIssue::new(
                    "adversary.lambda",
                    "required unless the environments are a Motzkin pair",
                )),
            },
            AdversarySpec::Stochastic { support, weights } | AdversarySpec::Oblivious { support, weights } => {
                for (i, l) in support.iter().enumerate() {
                    self.check_play(&format!("adversary.support[{i}]"), l, e, issues);
                }
                if let Err(err) = self.prior(support, weights) {
                    issues.push(ConfigIssue::new("adversary.weights", err.to_string()));
                }
            }
        }
    }

    fn check_play(&self, path: &str, lambda: &[f64], envs: usize, issues: &mut Vec<ConfigIssue>) {
        if lambda.len() != envs {
            issues.push(ConfigIssue::new(path, format!("has {} entries for {envs} environments", lambda.len())));
        } else if let Err(e) = MixturePlay::new(lambda.to_vec(), self.region) {
            issues.push(ConfigIssue::new(path, e.to_string()));
        }
    }

    fn motzkin_alpha(&self) -> Option<f64> {
        match self.environments {
            EnvironmentsSpec::Motzkin { alpha, .. } => Some(alpha),
            _ => None,
        }
    }

    fn prior(&self, support: &[Vec<f64>], weights: &[f64]) -> Result<StochasticPrior> {
        let plays = support
            .iter()
            .map(|l| MixturePlay::new(l.clone(), self.region))
            .collect::<Result<Vec<_>>>()?;
        StochasticPrior::new(plays, weights.to_vec())
    }
}

/// A validated scenario with its environments built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub space: ParamSpace,
    pub envs: Vec<Environment>,
    /// Present for expert-reduction scenarios (check only).
    pub experts: Option<ExpertInstance>,
}

impl Scenario {
    pub fn player(&self) -> Box<dyn Player> {
        match &self.config.player {
            PlayerSpec::Ftl { initial, oracle } => {
                let mut p = Ftl::new().with_search(oracle.search());
                if let Some(b) = initial {
                    p = p.with_initial(b.clone());
                }
                Box::new(p)
            }
            PlayerSpec::Ftpl { eta, initial, oracle } => {
                let mut p = Ftpl::new(*eta).with_search(oracle.search());
                if let Some(b) = initial {
                    p = p.with_initial(b.clone());
                }
                Box::new(p)
            }
            PlayerSpec::Ogd { initial, schedule } => {
                let mut p = Ogd::new(*schedule);
                if let Some(b) = initial {
                    p = p.with_initial(b.clone());
                }
                Box::new(p)
            }
            PlayerSpec::Minimax { oracle } => Box::new(Minimax::new().with_search(oracle.search())),
            PlayerSpec::BestResponse { oracle } => Box::new(BestResponse::new().with_search(oracle.search())),
        }
    }

    /// Curvature bounds, `G`, and the forceable gradient `g` of the environments.
    pub fn rate_constants(&self) -> Result<(RateConstants, bool)> {
        let g = forceable_gradient_g(&self.envs, &self.space, GlobalSearch::Auto)?;
        Ok((RateConstants::from_environments(&self.envs, g.g)?, g.approximate))
    }

    pub fn adversary(&self, seed: u64) -> Result<Box<dyn Adversary>> {
        let config = &self.config;
        Ok(match &config.adversary {
            AdversarySpec::VertexWorstCase => Box::new(VertexWorstCase),
            AdversarySpec::ZeroGradient => Box::new(ZeroGradient),
            AdversarySpec::HybridLogt => Box::new(HybridLogT::new(self.rate_constants()?.0)),
            AdversarySpec::AffineTrap { alpha } => {
                let alpha = alpha.unwrap_or(match config.region {
                    Region::Affine { alpha } => alpha,
                    Region::Convex => 0.0,
                });
                Box::new(AffineTrap::new(alpha)?)
            }
            AdversarySpec::Constant { lambda } => {
                let play = match (lambda, config.motzkin_alpha()) {
                    (Some(l), _) => MixturePlay::new(l.clone(), config.region)?,
                    (None, Some(a)) => MixturePlay::affine(vec![1.0 + a, -a], a)?,
                    (None, None) => return Err(Error::InvalidInput("constant adversary needs lambda".into())),
                };
                Box::new(Oblivious::constant(play))
            }
            AdversarySpec::Stochastic { support, weights } => {
                Box::new(StochasticAdversary::new(config.prior(support, weights)?))
            }
            AdversarySpec::Oblivious { support, weights } => Box::new(Oblivious::sampled(
                &config.prior(support, weights)?,
                config.horizon,
                seed,
            )),
        })
    }
}

fn quadratic_environment(id: usize, spec: &QuadraticSpec, space: &ParamSpace) -> Result<Environment> {
    let d = spec.mu.len();
    let q = match (&spec.q, spec.scale) {
        (Some(q), None) => q.clone(),
        (None, Some(s)) => (0..d)
            .map(|i| (0..d).map(|j| if i == j { 2.0 * s } else { 0.0 }).collect())
            .collect(),
        _ => return Err(Error::InvalidInput("give exactly one of `q` and `scale`".into())),
    };
    let risk = QuadraticRisk::new(q, spec.mu.clone(), spec.c)?;
    let bound = match spec.lipschitz {
        Some(g) => Some(g),
        None => quadratic_gradient_bound(&risk, space),
    };
    let env = Environment::quadratic(id, risk)?;
    Ok(match bound {
        Some(g) => env.with_lipschitz_bound(g),
        None => env,
    })
}

/// `max_{β∈B} ‖Q(β − μ)‖`. The norm is convex in `β`, so boxes and simplices
/// attain it at a vertex; balls use the triangle inequality.
fn quadratic_gradient_bound(risk: &QuadraticRisk, space: &ParamSpace) -> Option<f64> {
    let d = risk.minimizer().len();
    let grad_norm = |beta: &[f64]| {
        let mut g = vec![0.0; d];
        crate::game::Risk::add_gradient(risk, beta, 1.0, &mut g);
        crate::linalg::norm(&g)
    };
    match space {
        ParamSpace::Box { .. } | ParamSpace::Simplex { .. } => {
            let vertices = space.seed_vertices();
            (!vertices.is_empty()).then(|| vertices.iter().map(|v| grad_norm(v)).fold(0.0, f64::max))
        }
        ParamSpace::Ball { center, radius } => Some(grad_norm(center) + risk.eigen_bounds().1 * radius),
    }
}
