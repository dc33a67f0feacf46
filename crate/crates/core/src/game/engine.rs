use log::{debug, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{mixture_risk, CombinedRisk, Environment, MixturePlay, ParamSpace, Region, RegretLedger, RoundRecord};
use crate::error::{Error, Result};
use crate::optim::{global_min_grid, minimize_convex, GlobalSearch, SolverReport};
use crate::tolerance::Tolerances;

/// Slack allowed before a player's parameters count as leaving `B`.
const MEMBERSHIP_TOL: f64 = 1e-9;

/// Read-only view of the game handed to players and adversaries each round.
#[derive(Debug, Clone, Copy)]
pub struct GameContext<'a> {
    pub envs: &'a [Environment],
    pub space: &'a ParamSpace,
    pub tol: &'a Tolerances,
    pub region: Region,
    /// Current round, starting at 1.
    pub t: usize,
    pub horizon: usize,
}

pub trait Player: Send {
    fn name(&self) -> &str;

    /// Chooses `β̂_t` before the adversary moves.
    fn play(&mut self, ctx: &GameContext<'_>, rng: &mut ChaCha8Rng) -> Result<Vec<f64>>;

    /// Receives the realized loss of the round (full information).
    fn observe(&mut self, ctx: &GameContext<'_>, beta: &[f64], lambda: &MixturePlay) -> Result<()>;

    /// Diagnostic players may replace their recorded play after seeing `λ_t`.
    fn revise(&mut self, _ctx: &GameContext<'_>, _lambda: &MixturePlay) -> Result<Option<Vec<f64>>> {
        Ok(None)
    }
}

pub trait Adversary: Send {
    fn name(&self) -> &str;

    /// Chooses `λ_t` after seeing `β̂_t`. Oblivious adversaries ignore `beta`.
    fn choose(
        &mut self,
        ctx: &GameContext<'_>,
        beta: &[f64],
        history: &[MixturePlay],
        rng: &mut ChaCha8Rng,
    ) -> Result<MixturePlay>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GameConfig {
    pub horizon: usize,
    pub seed: u64,
    pub region: Region,
    pub tolerances: Tolerances,
    /// Search used when the hindsight problem is non-convex.
    #[serde(skip)]
    pub hindsight: GlobalSearch,
}

impl GameConfig {
    pub fn new(horizon: usize, seed: u64, region: Region) -> Self {
        GameConfig {
            horizon,
            seed,
            region,
            tolerances: Tolerances::default(),
            hindsight: GlobalSearch::Auto,
        }
    }

    pub fn with_hindsight(mut self, search: GlobalSearch) -> Self {
        self.hindsight = search;
        self
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }
}

pub(crate) fn check_environments(envs: &[Environment], space: &ParamSpace) -> Result<()> {
    if envs.is_empty() {
        return Err(Error::InvalidInput("at least one environment is required".into()));
    }
    for env in envs {
        if env.dim() != space.dim() {
            return Err(Error::DimensionMismatch {
                context: "environment vs parameter space",
                expected: space.dim(),
                found: env.dim(),
            });
        }
    }
    Ok(())
}

/// Plays `horizon` rounds of the reweighting game and fills the ledger,
/// including the best fixed parameter in hindsight.
///
/// Out-of-set player moves are projected back onto `B` with a warning; an
/// adversary leaving the configured region aborts the game.
pub fn run_game(
    envs: &[Environment],
    space: &ParamSpace,
    player: &mut dyn Player,
    adversary: &mut dyn Adversary,
    config: &GameConfig,
) -> Result<RegretLedger> {
    if config.horizon == 0 {
        return Err(Error::InvalidInput("horizon must be at least 1".into()));
    }
    check_environments(envs, space)?;

    let mut player_rng = ChaCha8Rng::seed_from_u64(config.seed);
    player_rng.set_stream(1);
    let mut adversary_rng = ChaCha8Rng::seed_from_u64(config.seed);
    adversary_rng.set_stream(2);

    let mut ledger = RegretLedger::new();
    let mut history: Vec<MixturePlay> = Vec::with_capacity(config.horizon);

    for t in 1..=config.horizon {
        let ctx = GameContext {
            envs,
            space,
            tol: &config.tolerances,
            region: config.region,
            t,
            horizon: config.horizon,
        };
        let mut beta = admit(space, player.play(&ctx, &mut player_rng)?, player.name(), t)?;

        let lambda = adversary.choose(&ctx, &beta, &history, &mut adversary_rng)?;
        if lambda.len() != envs.len() {
            return Err(Error::DimensionMismatch {
                context: "adversary coefficients vs environments",
                expected: envs.len(),
                found: lambda.len(),
            });
        }
        if !config.region.admits(lambda.coefficients()) {
            return Err(Error::RegionViolation {
                region: config.region.to_string(),
                detail: format!(
                    "adversary {} played {:?} in round {t}",
                    adversary.name(),
                    lambda.coefficients()
                ),
            });
        }

        if let Some(revised) = player.revise(&ctx, &lambda)? {
            beta = admit(space, revised, player.name(), t)?;
        }

        let loss = mixture_risk(&beta, &lambda, envs)?;
        player.observe(&ctx, &beta, &lambda)?;
        ledger.push(RoundRecord {
            t,
            beta,
            lambda: lambda.clone(),
            loss,
        });
        history.push(lambda);
    }

    let totals = ledger.cumulative_coefficients(ledger.horizon());
    let init = ledger.records().last().map(|r| r.beta.clone()).unwrap_or_default();
    let hindsight = hindsight_oracle(envs, space, &totals, &init, config.hindsight, &config.tolerances)?;
    if space.is_boundary_active(&hindsight.argmin, 1e-8) {
        warn!(
            "hindsight minimizer {:?} touches the boundary of B; the set may be too small for this scenario",
            hindsight.argmin
        );
    }
    ledger.set_hindsight(hindsight);
    Ok(ledger)
}

fn admit(space: &ParamSpace, beta: Vec<f64>, who: &str, t: usize) -> Result<Vec<f64>> {
    if beta.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            context: "player parameters vs space",
            expected: space.dim(),
            found: beta.len(),
        });
    }
    if space.contains(&beta, MEMBERSHIP_TOL) {
        Ok(beta)
    } else {
        warn!("player {who} left B in round {t}: {beta:?}; projecting");
        Ok(space.project(&beta))
    }
}

/// `min_β Σ_e w_e f_e(β)` for cumulative weights `w`: convex solver when
/// every weight is nonnegative, global search otherwise.
pub fn hindsight_oracle(
    envs: &[Environment],
    space: &ParamSpace,
    weights: &[f64],
    init: &[f64],
    search: GlobalSearch,
    tol: &Tolerances,
) -> Result<SolverReport> {
    let objective = CombinedRisk::new(envs, weights.to_vec());
    let report = if objective.is_convex() {
        let start = if init.len() == space.dim() {
            init.to_vec()
        } else {
            space.default_initial_point()
        };
        minimize_convex(&objective, space, &start, tol)
    } else {
        global_min_grid(&objective, space, search, true, tol)?
    };
    if !report.converged {
        debug!("hindsight oracle stopped with residual {:.3e}", report.grad_norm_at_solution);
        return Err(Error::Solver(Box::new(report)));
    }
    Ok(report)
}

/// Regret `R_t` at each requested round, each against its own hindsight
/// optimum over the first `t` losses.
pub fn regret_curve(
    ledger: &RegretLedger,
    envs: &[Environment],
    space: &ParamSpace,
    checkpoints: &[usize],
    search: GlobalSearch,
    tol: &Tolerances,
) -> Result<Vec<(usize, f64)>> {
    let records = ledger.records();
    let mut sorted: Vec<usize> = checkpoints.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut weights = vec![0.0; envs.len()];
    let mut next = 0;
    let mut out = Vec::with_capacity(sorted.len());
    for &t in &sorted {
        if t == 0 || t > records.len() {
            return Err(Error::InvalidInput(format!(
                "checkpoint {t} outside 1..={}",
                records.len()
            )));
        }
        while next < t {
            for (w, c) in weights.iter_mut().zip(records[next].lambda.coefficients()) {
                *w += c;
            }
            next += 1;
        }
        let h = hindsight_oracle(envs, space, &weights, &records[t - 1].beta, search, tol)?;
        out.push((t, ledger.cumulative_losses()[t - 1] - h.value));
    }
    Ok(out)
}

/// Roughly log-spaced rounds between `from` and `horizon`, always ending at
/// `horizon`.
pub fn log_checkpoints(from: usize, horizon: usize, count: usize) -> Vec<usize> {
    let from = from.clamp(1, horizon.max(1));
    let mut pts: Vec<usize> = (0..count)
        .map(|i| {
            let frac = if count > 1 { i as f64 / (count - 1) as f64 } else { 1.0 };
            ((from as f64).ln() + frac * ((horizon as f64).ln() - (from as f64).ln()))
                .exp()
                .round() as usize
        })
        .collect();
    pts.push(horizon);
    pts.sort_unstable();
    pts.dedup();
    pts.retain(|&t| t >= from && t <= horizon);
    pts
}
