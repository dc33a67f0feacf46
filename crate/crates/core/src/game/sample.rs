use std::fmt;
use std::sync::Arc;

use super::Risk;
use crate::error::{Error, Result};

/// Maps parameters and an observation to a prediction.
pub trait Predictor: Send + Sync + fmt::Debug {
    fn predict(&self, beta: &[f64], obs: &[f64]) -> f64;
    /// Accumulates `weight · ∂prediction/∂β` into `out`.
    fn add_gradient(&self, beta: &[f64], obs: &[f64], weight: f64, out: &mut [f64]);
}

pub trait PointLoss: Send + Sync + fmt::Debug {
    fn value(&self, prediction: f64, label: f64) -> f64;
    fn derivative(&self, prediction: f64, label: f64) -> f64;
}

/// `βᵀz`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearPredictor;

impl Predictor for LinearPredictor {
    fn predict(&self, beta: &[f64], obs: &[f64]) -> f64 {
        crate::linalg::dot(beta, obs)
    }

    fn add_gradient(&self, _beta: &[f64], obs: &[f64], weight: f64, out: &mut [f64]) {
        crate::linalg::axpy(weight, obs, out);
    }
}

/// Scalar `β` predicting `β²·z₁ + β·z₂` from a two-feature observation.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadraticFeaturePredictor;

impl Predictor for QuadraticFeaturePredictor {
    fn predict(&self, beta: &[f64], obs: &[f64]) -> f64 {
        beta[0] * beta[0] * obs[0] + beta[0] * obs[1]
    }

    fn add_gradient(&self, beta: &[f64], obs: &[f64], weight: f64, out: &mut [f64]) {
        out[0] += weight * (2.0 * beta[0] * obs[0] + obs[1]);
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SquaredLoss;

impl PointLoss for SquaredLoss {
    fn value(&self, prediction: f64, label: f64) -> f64 {
        let r = prediction - label;
        r * r
    }

    fn derivative(&self, prediction: f64, label: f64) -> f64 {
        2.0 * (prediction - label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub observation: Vec<f64>,
    pub label: f64,
    pub probability: f64,
}

impl Atom {
    pub fn new(observation: Vec<f64>, label: f64, probability: f64) -> Self {
        Atom {
            observation,
            label,
            probability,
        }
    }
}

/// Risk of a predictor under a finite atomic distribution.
#[derive(Debug, Clone)]
pub struct SampleRisk {
    dim: usize,
    atoms: Vec<Atom>,
    predictor: Arc<dyn Predictor>,
    loss: Arc<dyn PointLoss>,
}

impl SampleRisk {
    pub fn new(
        dim: usize,
        atoms: Vec<Atom>,
        predictor: Arc<dyn Predictor>,
        loss: Arc<dyn PointLoss>,
    ) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("sample environment needs at least one atom".into()));
        }
        if atoms.iter().any(|a| !(a.probability >= 0.0)) {
            return Err(Error::InvalidInput("atom probabilities must be nonnegative".into()));
        }
        let total: f64 = atoms.iter().map(|a| a.probability).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("atom probabilities sum to {total}, not 1")));
        }
        Ok(SampleRisk {
            dim,
            atoms,
            predictor,
            loss,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Flattens weighted environments into one signed atom list whose weight
    /// on each atom is `λ_e · p_atom`. Under affine weights the result is a
    /// signed measure rather than a distribution.
    pub fn pool(parts: &[(&SampleRisk, f64)]) -> Result<SampleRisk> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidInput("nothing to pool".into()))?
            .0;
        let mut atoms = Vec::new();
        for (risk, weight) in parts {
            if risk.dim != first.dim {
                return Err(Error::DimensionMismatch {
                    context: "SampleRisk::pool",
                    expected: first.dim,
                    found: risk.dim,
                });
            }
            atoms.extend(risk.atoms.iter().map(|a| Atom {
                probability: weight * a.probability,
                ..a.clone()
            }));
        }
        Ok(SampleRisk {
            dim: first.dim,
            atoms,
            predictor: first.predictor.clone(),
            loss: first.loss.clone(),
        })
    }
}

impl Risk for SampleRisk {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, beta: &[f64]) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.probability * self.loss.value(self.predictor.predict(beta, &a.observation), a.label))
            .sum()
    }

    fn add_gradient(&self, beta: &[f64], weight: f64, out: &mut [f64]) {
        for a in &self.atoms {
            let pred = self.predictor.predict(beta, &a.observation);
            let dl = self.loss.derivative(pred, a.label);
            self.predictor
                .add_gradient(beta, &a.observation, weight * a.probability * dl, out);
        }
    }
}
