use crate::error::{Error, Result};
use crate::game::{mixture_gradient, Environment, MixturePlay};

/// What a player remembers: realized coefficients, their running sum, and
/// its last play with the gradient observed there.
///
/// Summed coefficients suffice because the cumulative loss is
/// `Σ_e C_e R^e`, whatever order the rounds came in.
#[derive(Debug, Clone)]
pub struct PlayerState {
    history: Vec<MixturePlay>,
    cumulative: Vec<f64>,
    beta_current: Vec<f64>,
    last_gradient: Option<Vec<f64>>,
}

impl PlayerState {
    pub fn new(initial: Vec<f64>, env_count: usize) -> Self {
        PlayerState {
            history: Vec::new(),
            cumulative: vec![0.0; env_count],
            beta_current: initial,
            last_gradient: None,
        }
    }

    pub fn record(&mut self, beta: &[f64], lambda: &MixturePlay, envs: &[Environment]) -> Result<()> {
        if lambda.len() != self.cumulative.len() {
            return Err(Error::DimensionMismatch {
                context: "player history coefficients",
                expected: self.cumulative.len(),
                found: lambda.len(),
            });
        }
        self.last_gradient = Some(mixture_gradient(beta, lambda, envs)?);
        for (c, l) in self.cumulative.iter_mut().zip(lambda.coefficients()) {
            *c += l;
        }
        self.beta_current = beta.to_vec();
        self.history.push(lambda.clone());
        Ok(())
    }

    pub fn rounds(&self) -> usize {
        self.history.len()
    }

    pub fn history(&self) -> &[MixturePlay] {
        &self.history
    }

    pub fn cumulative_coefficients(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn beta_current(&self) -> &[f64] {
        &self.beta_current
    }

    pub fn last_gradient(&self) -> Option<&[f64]> {
        self.last_gradient.as_deref()
    }
}
