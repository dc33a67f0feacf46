//! Player strategies: follow-the-leader (ERM), its perturbed variant, online
//! gradient descent, a fixed one-shot minimax point, and a best-response
//! diagnostic that peeks at `λ_t`.

mod state;

pub use state::PlayerState;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    minimize_worst_case, vertex_pieces, CombinedRisk, Environment, GameContext, MixturePlay, ParamSpace, Player,
};
use crate::optim::{global_min_grid, minimize_convex, GlobalSearch};
use crate::tolerance::Tolerances;

/// `argmin_β Σ_e w_e R^e(β) − σᵀβ` over `space`.
///
/// The objective is divided by `Σ w` first (when positive), which leaves the
/// argmin unchanged and keeps tolerances meaningful for long histories.
/// Nonnegative weights go to the convex solver, the rest to global search.
pub fn leader(
    envs: &[Environment],
    space: &ParamSpace,
    weights: &[f64],
    perturbation: Option<&[f64]>,
    init: &[f64],
    search: GlobalSearch,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    let total: f64 = weights.iter().sum();
    let scale = if total > 0.0 { total } else { 1.0 };
    let mut objective = CombinedRisk::new(envs, weights.iter().map(|w| w / scale).collect());
    if let Some(sigma) = perturbation {
        objective = objective.with_linear_term(sigma.iter().map(|s| s / scale).collect());
    }
    let report = if objective.is_convex() {
        minimize_convex(&objective, space, init, tol)
    } else {
        global_min_grid(&objective, space, search, true, tol)?
    };
    if !report.converged {
        return Err(Error::Solver(Box::new(report)));
    }
    Ok(report.argmin)
}

/// Follow-the-leader: the ERM solution over every loss seen so far.
pub fn ftl_play(
    state: &PlayerState,
    envs: &[Environment],
    space: &ParamSpace,
    search: GlobalSearch,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    if state.rounds() == 0 {
        return Ok(state.beta_current().to_vec());
    }
    leader(envs, space, state.cumulative_coefficients(), None, state.beta_current(), search, tol)
}

/// Draws `σ` (signed exponential per coordinate, rate `eta`) and minimizes
/// the perturbed cumulative loss.
pub fn ftpl_play(
    state: &PlayerState,
    envs: &[Environment],
    space: &ParamSpace,
    eta: f64,
    rng: &mut ChaCha8Rng,
    search: GlobalSearch,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    let sigma = draw_perturbation(space.dim(), eta, rng)?;
    ftpl_play_with_perturbation(state, envs, space, &sigma, search, tol)
}

pub fn draw_perturbation(dim: usize, eta: f64, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let invalid = || Error::InvalidInput(format!("FTPL rate must be positive and finite, got {eta}"));
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(invalid());
    }
    let exp = Exp::new(eta).map_err(|_| invalid())?;
    Ok((0..dim)
        .map(|_| {
            let magnitude = exp.sample(rng);
            if rng.random::<bool>() {
                magnitude
            } else {
                -magnitude
            }
        })
        .collect())
}

pub fn ftpl_play_with_perturbation(
    state: &PlayerState,
    envs: &[Environment],
    space: &ParamSpace,
    sigma: &[f64],
    search: GlobalSearch,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    if state.rounds() == 0 {
        return Ok(state.beta_current().to_vec());
    }
    leader(envs, space, state.cumulative_coefficients(), Some(sigma), state.beta_current(), search, tol)
}

/// One projected gradient step from the last play.
pub fn ogd_play(state: &PlayerState, space: &ParamSpace, step: f64) -> Vec<f64> {
    match state.last_gradient() {
        None => state.beta_current().to_vec(),
        Some(grad) => {
            let mut next = state.beta_current().to_vec();
            crate::linalg::axpy(-step, grad, &mut next);
            space.project(&next)
        }
    }
}

/// `argmin_β max_e R^e(β)`, the one-shot minimax point.
pub fn minimax_play(envs: &[Environment], space: &ParamSpace, search: GlobalSearch, tol: &Tolerances) -> Result<Vec<f64>> {
    Ok(minimize_worst_case(envs, space, &vertex_pieces(envs.len()), search, tol)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSchedule {
    /// `1/(σ t)`, with `σ` the smallest environment curvature unless given.
    StronglyConvex { sigma: Option<f64> },
    Constant { step: f64 },
    /// `scale/√t`.
    InverseSqrt { scale: f64 },
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule::StronglyConvex { sigma: None }
    }
}

impl StepSchedule {
    pub fn step(&self, t: usize, envs: &[Environment]) -> f64 {
        let t = t as f64;
        match *self {
            StepSchedule::StronglyConvex { sigma } => {
                let sigma = sigma.unwrap_or_else(|| {
                    envs.iter().map(Environment::sigma_min).fold(f64::INFINITY, f64::min)
                });
                1.0 / (sigma * t)
            }
            StepSchedule::Constant { step } => step,
            StepSchedule::InverseSqrt { scale } => scale / t.sqrt(),
        }
    }
}

fn start_point(initial: &Option<Vec<f64>>, space: &ParamSpace) -> Result<Vec<f64>> {
    match initial {
        Some(b) if b.len() != space.dim() => Err(Error::DimensionMismatch {
            context: "initial point vs space",
            expected: space.dim(),
            found: b.len(),
        }),
        Some(b) => Ok(b.clone()),
        None => Ok(space.default_initial_point()),
    }
}

fn ensure_state<'s>(
    state: &'s mut Option<PlayerState>,
    initial: &Option<Vec<f64>>,
    ctx: &GameContext<'_>,
) -> Result<&'s mut PlayerState> {
    if state.is_none() {
        *state = Some(PlayerState::new(start_point(initial, ctx.space)?, ctx.envs.len()));
    }
    Ok(state.as_mut().expect("initialized above"))
}

fn observe_into(state: &mut Option<PlayerState>, ctx: &GameContext<'_>, beta: &[f64], lambda: &MixturePlay) -> Result<()> {
    let state = state
        .as_mut()
        .ok_or_else(|| Error::InvalidInput("observe called before play".into()))?;
    state.record(beta, lambda, ctx.envs)
}

#[derive(Debug, Default)]
pub struct Ftl {
    initial: Option<Vec<f64>>,
    search: Option<GlobalSearch>,
    state: Option<PlayerState>,
    /// Last leader, keyed by the cumulative coefficients divided by `t`.
    cache: Option<(Vec<f64>, Vec<f64>)>,
}

impl Ftl {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_initial(mut self, beta: Vec<f64>) -> Self {
        self.initial = Some(beta);
        self
    }

    pub fn with_search(mut self, search: GlobalSearch) -> Self {
        self.search = Some(search);
        self
    }

    pub fn state(&self) -> Option<&PlayerState> {
        self.state.as_ref()
    }
}

impl Player for Ftl {
    fn name(&self) -> &str {
        "ftl"
    }

    fn play(&mut self, ctx: &GameContext<'_>, _rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let search = self.search.unwrap_or(GlobalSearch::Auto);
        let state = ensure_state(&mut self.state, &self.initial, ctx)?;
        if state.rounds() == 0 {
            return Ok(state.beta_current().to_vec());
        }
        let t = state.rounds() as f64;
        let key: Vec<f64> = state.cumulative_coefficients().iter().map(|c| c / t).collect();
        if let Some((cached_key, beta)) = &self.cache {
            if *cached_key == key {
                return Ok(beta.clone());
            }
        }
        let beta = ftl_play(state, ctx.envs, ctx.space, search, ctx.tol)?;
        self.cache = Some((key, beta.clone()));
        Ok(beta)
    }

    fn observe(&mut self, ctx: &GameContext<'_>, beta: &[f64], lambda: &MixturePlay) -> Result<()> {
        observe_into(&mut self.state, ctx, beta, lambda)
    }
}

#[derive(Debug, Default)]
pub struct Ftpl {
    eta: Option<f64>,
    initial: Option<Vec<f64>>,
    search: Option<GlobalSearch>,
    state: Option<PlayerState>,
}

impl Ftpl {
    /// `eta = None` selects `√T/D` at the first round.
    pub fn new(eta: Option<f64>) -> Self {
        Ftpl {
            eta,
            ..Self::default()
        }
    }

    pub fn with_initial(mut self, beta: Vec<f64>) -> Self {
        self.initial = Some(beta);
        self
    }

    pub fn with_search(mut self, search: GlobalSearch) -> Self {
        self.search = Some(search);
        self
    }

    pub fn default_eta(horizon: usize, space: &ParamSpace) -> f64 {
        let d = space.diameter();
        let root = (horizon as f64).sqrt();
        if d > 0.0 {
            root / d
        } else {
            root
        }
    }
}

impl Player for Ftpl {
    fn name(&self) -> &str {
        "ftpl"
    }

    fn play(&mut self, ctx: &GameContext<'_>, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let eta = *self.eta.get_or_insert_with(|| Ftpl::default_eta(ctx.horizon, ctx.space));
        let search = self.search.unwrap_or(GlobalSearch::Auto);
        let state = ensure_state(&mut self.state, &self.initial, ctx)?;
        // The draw happens every round so the stream does not depend on history.
        let sigma = draw_perturbation(ctx.space.dim(), eta, rng)?;
        ftpl_play_with_perturbation(state, ctx.envs, ctx.space, &sigma, search, ctx.tol)
    }

    fn observe(&mut self, ctx: &GameContext<'_>, beta: &[f64], lambda: &MixturePlay) -> Result<()> {
        observe_into(&mut self.state, ctx, beta, lambda)
    }
}

#[derive(Debug, Default)]
pub struct Ogd {
    schedule: StepSchedule,
    initial: Option<Vec<f64>>,
    state: Option<PlayerState>,
}

impl Ogd {
    pub fn new(schedule: StepSchedule) -> Self {
        Ogd {
            schedule,
            ..Self::default()
        }
    }

    pub fn with_initial(mut self, beta: Vec<f64>) -> Self {
        self.initial = Some(beta);
        self
    }
}

impl Player for Ogd {
    fn name(&self) -> &str {
        "ogd"
    }

    fn play(&mut self, ctx: &GameContext<'_>, _rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let state = ensure_state(&mut self.state, &self.initial, ctx)?;
        let previous = state.rounds();
        let step = if previous == 0 { 0.0 } else { self.schedule.step(previous, ctx.envs) };
        Ok(ogd_play(state, ctx.space, step))
    }

    fn observe(&mut self, ctx: &GameContext<'_>, beta: &[f64], lambda: &MixturePlay) -> Result<()> {
        observe_into(&mut self.state, ctx, beta, lambda)
    }
}

/// Replays the one-shot minimax point every round.
#[derive(Debug, Default)]
pub struct Minimax {
    search: Option<GlobalSearch>,
    beta: Option<Vec<f64>>,
}

impl Minimax {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_search(mut self, search: GlobalSearch) -> Self {
        self.search = Some(search);
        self
    }
}

impl Player for Minimax {
    fn name(&self) -> &str {
        "minimax"
    }

    fn play(&mut self, ctx: &GameContext<'_>, _rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        if self.beta.is_none() {
            let search = self.search.unwrap_or(GlobalSearch::Auto);
            self.beta = Some(minimax_play(ctx.envs, ctx.space, search, ctx.tol)?);
        }
        Ok(self.beta.clone().expect("set above"))
    }

    fn observe(&mut self, _ctx: &GameContext<'_>, _beta: &[f64], _lambda: &MixturePlay) -> Result<()> {
        Ok(())
    }
}

/// Diagnostic player that answers `argmin f_t` after seeing `λ_t`. Its
/// regret is non-positive up to solver tolerance against any adversary.
#[derive(Debug, Default)]
pub struct BestResponse {
    search: Option<GlobalSearch>,
    beta: Option<Vec<f64>>,
}

impl BestResponse {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_search(mut self, search: GlobalSearch) -> Self {
        self.search = Some(search);
        self
    }
}

impl Player for BestResponse {
    fn name(&self) -> &str {
        "best_response"
    }

    fn play(&mut self, ctx: &GameContext<'_>, _rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        Ok(self.beta.clone().unwrap_or_else(|| ctx.space.default_initial_point()))
    }

    fn observe(&mut self, _ctx: &GameContext<'_>, beta: &[f64], _lambda: &MixturePlay) -> Result<()> {
        self.beta = Some(beta.to_vec());
        Ok(())
    }

    fn revise(&mut self, ctx: &GameContext<'_>, lambda: &MixturePlay) -> Result<Option<Vec<f64>>> {
        let init = self.beta.clone().unwrap_or_else(|| ctx.space.default_initial_point());
        let search = self.search.unwrap_or(GlobalSearch::Auto);
        leader(ctx.envs, ctx.space, lambda.coefficients(), None, &init, search, ctx.tol).map(Some)
    }
}
