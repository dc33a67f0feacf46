use log::trace;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{steepest_vertex, vertex_worst_case, zero_gradient_play};
use crate::error::{Error, Result};
use crate::game::{mixture_gradient, Adversary, CombinedRisk, GameContext, MixturePlay};
use crate::linalg::{dist_sq, dot, sub};
use crate::optim::{minimize_convex, RateConstants};

/// Round counts by branch, for diagnostics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct HybridStats {
    /// Player far from the leader: zero-gradient average played.
    pub far: usize,
    /// Player near the leader: steepest vertex played.
    pub near: usize,
    /// Near rounds where the forced gradient points away from the leader.
    pub case_one: usize,
    pub case_two: usize,
}

/// Adversary forcing logarithmic regret on FTL-like players.
///
/// When `‖β̂_t − β*_{t−1}‖² ≥ g²/(8tσ_max²)` it replays the history average,
/// otherwise it plays the vertex with the largest gradient norm at `β̂_t`.
#[derive(Debug, Clone)]
pub struct HybridLogT {
    consts: RateConstants,
    totals: Vec<f64>,
    seen: usize,
    leader: Option<Vec<f64>>,
    stats: HybridStats,
}

impl HybridLogT {
    pub fn new(consts: RateConstants) -> Self {
        HybridLogT {
            consts,
            totals: Vec::new(),
            seen: 0,
            leader: None,
            stats: HybridStats::default(),
        }
    }

    pub fn stats(&self) -> HybridStats {
        self.stats
    }

    /// Squared distance beyond which round `t` counts as far.
    pub fn threshold(&self, t: usize) -> f64 {
        let g = self.consts.g;
        g * g / (8.0 * t as f64 * self.consts.sigma_max * self.consts.sigma_max)
    }

    fn absorb(&mut self, history: &[MixturePlay]) {
        if self.totals.len() != history.first().map_or(0, MixturePlay::len) {
            self.totals = vec![0.0; history[0].len()];
            self.seen = 0;
        }
        for lambda in &history[self.seen..] {
            for (c, l) in self.totals.iter_mut().zip(lambda.coefficients()) {
                *c += l;
            }
        }
        self.seen = history.len();
    }
}

impl Adversary for HybridLogT {
    fn name(&self) -> &str {
        "hybrid_logt"
    }

    fn choose(
        &mut self,
        ctx: &GameContext<'_>,
        beta: &[f64],
        history: &[MixturePlay],
        _rng: &mut ChaCha8Rng,
    ) -> Result<MixturePlay> {
        if history.is_empty() {
            return vertex_worst_case(beta, ctx.envs);
        }
        if history.len() < self.seen {
            self.seen = 0;
            self.totals.clear();
        }
        self.absorb(history);

        let scale = history.len() as f64;
        let objective = CombinedRisk::new(ctx.envs, self.totals.iter().map(|c| c / scale).collect());
        if !objective.is_convex() {
            return Err(Error::InvalidInput("hybrid adversary requires a convex history".into()));
        }
        let init = self.leader.clone().unwrap_or_else(|| beta.to_vec());
        let report = minimize_convex(&objective, ctx.space, &init, ctx.tol);
        if !report.converged {
            return Err(Error::Solver(Box::new(report)));
        }
        let leader = report.argmin;

        let play = if dist_sq(beta, &leader) >= self.threshold(ctx.t) {
            self.stats.far += 1;
            zero_gradient_play(history)?
        } else {
            self.stats.near += 1;
            let play = steepest_vertex(beta, ctx.envs)?;
            let inner = dot(&mixture_gradient(&leader, &play, ctx.envs)?, &sub(beta, &leader));
            let cut = self.consts.g * self.consts.g * self.consts.sigma_min
                / (16.0 * ctx.t as f64 * self.consts.sigma_max * self.consts.sigma_max);
            if inner >= -cut {
                self.stats.case_one += 1;
            } else {
                self.stats.case_two += 1;
            }
            trace!("round {}: near branch, inner product {inner:.3e}", ctx.t);
            play
        };
        self.leader = Some(leader);
        Ok(play)
    }
}
