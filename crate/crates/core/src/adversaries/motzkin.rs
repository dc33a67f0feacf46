use serde::Serialize;

use super::{GraphInstance, Oblivious};
use crate::error::{Error, Result};
use crate::game::{Environment, MixturePlay, QuadraticRisk, RegretLedger};

/// The pair `βᵀ(nI + A)β/(1+α)` and `(n−1)‖β‖²/α` over `Δ_n`. Under the
/// weights `(1+α, −α)` they combine to `βᵀ(I + A)β`.
pub fn motzkin_environments(graph: &GraphInstance, alpha: f64) -> Result<Vec<Environment>> {
    let n = graph.n();
    if n < 2 {
        return Err(Error::InvalidInput("the reduction needs at least two vertices".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")));
    }
    let adjacency = graph.adjacency();
    let nf = n as f64;
    let first: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let diag = if i == j { nf } else { 0.0 };
                    2.0 * (diag + adjacency[i][j]) / (1.0 + alpha)
                })
                .collect()
        })
        .collect();
    let second: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 2.0 * (nf - 1.0) / alpha } else { 0.0 })
                .collect()
        })
        .collect();
    Ok(vec![
        Environment::quadratic(0, QuadraticRisk::new(first, vec![0.0; n], 0.0)?)?,
        Environment::quadratic(1, QuadraticRisk::new(second, vec![0.0; n], 0.0)?)?,
    ])
}

/// Environments plus the oblivious adversary replaying `(1+α, −α)`.
pub fn motzkin_adversary(graph: &GraphInstance, alpha: f64) -> Result<(Oblivious, Vec<Environment>)> {
    let envs = motzkin_environments(graph, alpha)?;
    let play = MixturePlay::affine(vec![1.0 + alpha, -alpha], alpha)?;
    Ok((Oblivious::constant(play), envs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StableSetEstimate {
    /// `T / L_T`.
    pub gamma_hat: f64,
    /// `[γ̂, 2γ̂]`, which holds `γ` once regret is at most `T/n`.
    pub interval: (f64, f64),
    pub regret: f64,
    pub certified: bool,
}

impl StableSetEstimate {
    pub fn contains(&self, gamma: f64) -> bool {
        self.interval.0 <= gamma && gamma <= self.interval.1
    }
}

/// Reads a stable-set size estimate off a finished Motzkin game.
pub fn stable_set_estimate(ledger: &RegretLedger, n: usize) -> Result<StableSetEstimate> {
    let horizon = ledger.horizon();
    if horizon == 0 {
        return Err(Error::InvalidInput("empty ledger".into()));
    }
    let loss = ledger.cumulative_loss();
    if !(loss > 0.0) {
        return Err(Error::Corrupt(format!(
            "cumulative loss {loss} is not positive; simplex plays always lose at least 1/n per round"
        )));
    }
    let gamma_hat = horizon as f64 / loss;
    let regret = ledger.regret();
    Ok(StableSetEstimate {
        gamma_hat,
        interval: (gamma_hat, 2.0 * gamma_hat),
        regret,
        certified: regret <= horizon as f64 / n as f64,
    })
}
