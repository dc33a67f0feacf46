//! Adversaries: environment reweighting rules that react to (or ignore) the
//! player's current parameters.

mod experts;
mod graph;
mod hybrid;
mod motzkin;
mod stochastic;
mod trap;

pub use experts::{expert_reduction_envs, verify_expert_identity, BaseLoss, ExpertInstance};
pub use graph::{GraphInstance, MAX_CERTIFIED_VERTICES};
pub use hybrid::{HybridLogT, HybridStats};
pub use motzkin::{motzkin_adversary, motzkin_environments, stable_set_estimate, StableSetEstimate};
pub use stochastic::{stochastic_play, Oblivious, StochasticAdversary, StochasticPrior};
pub use trap::{affine_trap_environments, affine_trap_play, sampled_trap_environments, AffineTrap};

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{Adversary, Environment, GameContext, MixturePlay, Region};
use crate::linalg::{norm, CompensatedSum};

/// Indicator of the riskiest environment at `beta`; ties go to the lowest index.
pub fn vertex_worst_case(beta: &[f64], envs: &[Environment]) -> Result<MixturePlay> {
    argmax_vertex(envs, |e| e.risk(beta))
}

/// Indicator of the environment with the steepest gradient at `beta`.
pub fn steepest_vertex(beta: &[f64], envs: &[Environment]) -> Result<MixturePlay> {
    argmax_vertex(envs, |e| norm(&e.gradient(beta)))
}

fn argmax_vertex(envs: &[Environment], score: impl Fn(&Environment) -> f64) -> Result<MixturePlay> {
    if envs.is_empty() {
        return Err(Error::InvalidInput("no environments to choose from".into()));
    }
    let mut best = (0, f64::NEG_INFINITY);
    for (i, env) in envs.iter().enumerate() {
        let s = score(env);
        if s > best.1 {
            best = (i, s);
        }
    }
    Ok(MixturePlay::vertex(envs.len(), best.0))
}

/// The average of every past `λ`: the new loss is `F_{t−1}/(t−1)`, whose
/// gradient vanishes at the current leader.
pub fn zero_gradient_play(history: &[MixturePlay]) -> Result<MixturePlay> {
    let first = history
        .first()
        .ok_or_else(|| Error::InvalidInput("zero-gradient play needs at least one past round".into()))?;
    let e = first.len();
    let mut sums: Vec<CompensatedSum> = vec![CompensatedSum::new(); e];
    let mut region = Region::Convex;
    for lambda in history {
        if lambda.len() != e {
            return Err(Error::DimensionMismatch {
                context: "zero-gradient history",
                expected: e,
                found: lambda.len(),
            });
        }
        for (s, c) in sums.iter_mut().zip(lambda.coefficients()) {
            s.add(*c);
        }
        region = widest(region, lambda.region());
    }
    let n = history.len() as f64;
    MixturePlay::new(sums.iter().map(|s| s.value() / n).collect(), region)
}

fn widest(a: Region, b: Region) -> Region {
    match (a, b) {
        (Region::Convex, r) | (r, Region::Convex) => r,
        (Region::Affine { alpha: x }, Region::Affine { alpha: y }) => Region::Affine { alpha: x.max(y) },
    }
}

/// Plays the riskiest vertex every round.
#[derive(Debug, Default, Clone, Copy)]
pub struct VertexWorstCase;

impl Adversary for VertexWorstCase {
    fn name(&self) -> &str {
        "vertex_worst_case"
    }

    fn choose(
        &mut self,
        ctx: &GameContext<'_>,
        beta: &[f64],
        _history: &[MixturePlay],
        _rng: &mut ChaCha8Rng,
    ) -> Result<MixturePlay> {
        vertex_worst_case(beta, ctx.envs)
    }
}

/// Zero-gradient averaging after a worst-case first round.
#[derive(Debug, Default, Clone, Copy)]
pub struct ZeroGradient;

impl Adversary for ZeroGradient {
    fn name(&self) -> &str {
        "zero_gradient"
    }

    fn choose(
        &mut self,
        ctx: &GameContext<'_>,
        beta: &[f64],
        history: &[MixturePlay],
        _rng: &mut ChaCha8Rng,
    ) -> Result<MixturePlay> {
        if history.is_empty() {
            vertex_worst_case(beta, ctx.envs)
        } else {
            zero_gradient_play(history)
        }
    }
}
