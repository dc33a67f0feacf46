use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{AnalyticRisk, Environment, MixturePlay};
use crate::linalg::{dot, norm_sq};

/// Loss between a combined prediction and its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseLoss {
    Squared,
    Absolute,
    Zero,
}

impl BaseLoss {
    pub fn value(self, prediction: f64, target: f64) -> f64 {
        match self {
            BaseLoss::Squared => (prediction - target).powi(2),
            BaseLoss::Absolute => (prediction - target).abs(),
            BaseLoss::Zero => 0.0,
        }
    }

    /// Derivative in the prediction (a subgradient for the absolute loss).
    pub fn derivative(self, prediction: f64, target: f64) -> f64 {
        match self {
            BaseLoss::Squared => 2.0 * (prediction - target),
            BaseLoss::Absolute => (prediction - target).signum() * f64::from(prediction != target),
            BaseLoss::Zero => 0.0,
        }
    }
}

/// Prediction with expert advice, one round per entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpertInstance {
    pub alpha: f64,
    pub predictions: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub loss: BaseLoss,
}

impl ExpertInstance {
    pub fn new(alpha: f64, predictions: Vec<Vec<f64>>, targets: Vec<f64>, loss: BaseLoss) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")));
        }
        if predictions.len() != targets.len() || predictions.is_empty() {
            return Err(Error::InvalidInput("need one target per round of predictions".into()));
        }
        let e = predictions[0].len();
        if e == 0 || predictions.iter().any(|p| p.len() != e) {
            return Err(Error::InvalidInput("every round needs the same positive expert count".into()));
        }
        Ok(ExpertInstance {
            alpha,
            predictions,
            targets,
            loss,
        })
    }

    /// Uniform predictions and targets in `[−1, 1]`.
    pub fn random(experts: usize, rounds: usize, alpha: f64, loss: BaseLoss, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let predictions = (0..rounds)
            .map(|_| (0..experts).map(|_| rng.random_range(-1.0..=1.0)).collect())
            .collect();
        let targets = (0..rounds).map(|_| rng.random_range(-1.0..=1.0)).collect();
        Self::new(alpha, predictions, targets, loss)
    }

    pub fn experts(&self) -> usize {
        self.predictions[0].len()
    }

    pub fn rounds(&self) -> usize {
        self.targets.len()
    }

    /// `ℓ(δᵀθ̃_t, θ*_t)` for round `t` (1-based).
    pub fn round_loss(&self, t: usize, delta: &[f64]) -> Result<f64> {
        let (theta, target) = self.round(t)?;
        Ok(self.loss.value(dot(delta, theta), target))
    }

    fn round(&self, t: usize) -> Result<(&[f64], f64)> {
        let i = t
            .checked_sub(1)
            .filter(|&i| i < self.rounds())
            .ok_or_else(|| Error::InvalidInput(format!("expert instance has no round {t}")))?;
        Ok((&self.predictions[i], self.targets[i]))
    }
}

/// The two environments over `Δ_E` for round `t` and the weights
/// `(1+α, −α)` that turn them back into the experts loss:
/// `f₁ = [ℓ(δᵀθ̃, θ*) + ‖δ‖²]/(1+α)` and `f₂ = ‖δ‖²/α`.
pub fn expert_reduction_envs(instance: &ExpertInstance, t: usize) -> Result<(Environment, Environment, MixturePlay)> {
    let (theta, target) = instance.round(t)?;
    let theta = theta.to_vec();
    let alpha = instance.alpha;
    let loss = instance.loss;
    let dim = theta.len();

    let theta_v = theta.clone();
    let theta_g = theta.clone();
    let first = AnalyticRisk::new(
        dim,
        format!("experts round {t}, first"),
        move |d: &[f64]| (loss.value(dot(d, &theta_v), target) + norm_sq(d)) / (1.0 + alpha),
        move |d: &[f64], out: &mut [f64]| {
            let slope = loss.derivative(dot(d, &theta_g), target);
            for ((o, di), th) in out.iter_mut().zip(d).zip(&theta_g) {
                *o = (slope * th + 2.0 * di) / (1.0 + alpha);
            }
        },
    );
    let curvature = match loss {
        BaseLoss::Squared => 2.0 * norm_sq(&theta),
        BaseLoss::Absolute | BaseLoss::Zero => 0.0,
    };
    let second = AnalyticRisk::new(
        dim,
        format!("experts round {t}, second"),
        move |d: &[f64]| norm_sq(d) / alpha,
        move |d: &[f64], out: &mut [f64]| {
            for (o, di) in out.iter_mut().zip(d) {
                *o = 2.0 * di / alpha;
            }
        },
    );
    Ok((
        Environment::custom(0, first, 2.0 / (1.0 + alpha), (2.0 + curvature) / (1.0 + alpha))?,
        Environment::custom(1, second, 2.0 / alpha, 2.0 / alpha)?,
        MixturePlay::affine(vec![1.0 + alpha, -alpha], alpha)?,
    ))
}

/// `|(1+α)f₁(δ) − αf₂(δ) − ℓ(δᵀθ̃_t, θ*_t)|`.
pub fn verify_expert_identity(instance: &ExpertInstance, t: usize, delta: &[f64]) -> Result<f64> {
    let (f1, f2, play) = expert_reduction_envs(instance, t)?;
    let c = play.coefficients();
    let combined = c[0] * f1.risk(delta) + c[1] * f2.risk(delta);
    Ok((combined - instance.round_loss(t, delta)?).abs())
}
