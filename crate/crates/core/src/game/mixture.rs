use std::fmt;

use serde::{Deserialize, Serialize};

use super::Environment;
use crate::error::{Error, Result};
use crate::optim::Objective;

const SUM_TOL: f64 = 1e-12;

/// Playable region for the adversary's coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// The probability simplex: interpolation.
    Convex,
    /// Coefficients summing to one with every entry `>= -alpha`: extrapolation.
    Affine { alpha: f64 },
}

impl Region {
    pub fn lower_bound(&self) -> f64 {
        match self {
            Region::Convex => 0.0,
            Region::Affine { alpha } => -alpha,
        }
    }

    /// Whether `coefficients` lie in this region.
    pub fn admits(&self, coefficients: &[f64]) -> bool {
        self.check(coefficients).is_ok()
    }

    fn check(&self, coefficients: &[f64]) -> Result<()> {
        if let Region::Affine { alpha } = self {
            if !(*alpha > 0.0) || !alpha.is_finite() {
                return Err(Error::InvalidInput(format!("affine region needs alpha > 0, got {alpha}")));
            }
        }
        if coefficients.is_empty() {
            return Err(self.violation("empty coefficient vector".into()));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(self.violation("non-finite coefficient".into()));
        }
        let sum: f64 = coefficients.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(self.violation(format!("coefficients sum to {sum}")));
        }
        let floor = self.lower_bound();
        if let Some((e, c)) = coefficients.iter().enumerate().find(|(_, &c)| c < floor) {
            return Err(self.violation(format!("coefficient {e} is {c} < {floor}")));
        }
        Ok(())
    }

    fn violation(&self, detail: String) -> Error {
        Error::RegionViolation {
            region: self.to_string(),
            detail,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Convex => write!(f, "convex"),
            Region::Affine { alpha } => write!(f, "affine(alpha={alpha})"),
        }
    }
}

/// A validated coefficient vector `λ` over the environments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixturePlay {
    coefficients: Vec<f64>,
    region: Region,
}

impl MixturePlay {
    pub fn new(coefficients: Vec<f64>, region: Region) -> Result<Self> {
        region.check(&coefficients)?;
        Ok(MixturePlay { coefficients, region })
    }

    pub fn convex(coefficients: Vec<f64>) -> Result<Self> {
        Self::new(coefficients, Region::Convex)
    }

    pub fn affine(coefficients: Vec<f64>, alpha: f64) -> Result<Self> {
        Self::new(coefficients, Region::Affine { alpha })
    }

    /// Indicator of environment `index` among `count`.
    pub fn vertex(count: usize, index: usize) -> Self {
        assert!(index < count, "vertex {index} out of range for {count} environments");
        let mut coefficients = vec![0.0; count];
        coefficients[index] = 1.0;
        MixturePlay {
            coefficients,
            region: Region::Convex,
        }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

fn check_shapes(beta: &[f64], lambda: &MixturePlay, envs: &[Environment]) -> Result<()> {
    if envs.len() != lambda.len() {
        return Err(Error::DimensionMismatch {
            context: "coefficient count vs environments",
            expected: envs.len(),
            found: lambda.len(),
        });
    }
    for env in envs {
        if env.dim() != beta.len() {
            return Err(Error::DimensionMismatch {
                context: "parameter vs environment dimension",
                expected: env.dim(),
                found: beta.len(),
            });
        }
    }
    Ok(())
}

/// `Σ_e λ_e R^e(β)`: the risk of `β` under the reweighted mixture. Negative
/// values are legitimate under affine coefficients.
pub fn mixture_risk(beta: &[f64], lambda: &MixturePlay, envs: &[Environment]) -> Result<f64> {
    check_shapes(beta, lambda, envs)?;
    Ok(weighted_risk(beta, lambda.coefficients(), envs))
}

pub fn mixture_gradient(beta: &[f64], lambda: &MixturePlay, envs: &[Environment]) -> Result<Vec<f64>> {
    check_shapes(beta, lambda, envs)?;
    let mut g = vec![0.0; beta.len()];
    for (env, &w) in envs.iter().zip(lambda.coefficients()) {
        if w != 0.0 {
            env.add_gradient(beta, w, &mut g);
        }
    }
    Ok(g)
}

pub(crate) fn weighted_risk(beta: &[f64], weights: &[f64], envs: &[Environment]) -> f64 {
    envs.iter()
        .zip(weights)
        .filter(|(_, &w)| w != 0.0)
        .map(|(env, &w)| w * env.risk(beta))
        .sum()
}

/// `Σ_e w_e R^e(β) − σᵀβ` as an optimizable objective. Weights are
/// unrestricted: cumulative histories and perturbed leaders both use it.
#[derive(Debug, Clone)]
pub struct CombinedRisk<'a> {
    envs: &'a [Environment],
    weights: Vec<f64>,
    linear: Option<Vec<f64>>,
}

impl<'a> CombinedRisk<'a> {
    pub fn new(envs: &'a [Environment], weights: Vec<f64>) -> Self {
        debug_assert_eq!(envs.len(), weights.len());
        CombinedRisk {
            envs,
            weights,
            linear: None,
        }
    }

    /// Subtracts `σᵀβ` from the objective.
    pub fn with_linear_term(mut self, sigma: Vec<f64>) -> Self {
        self.linear = Some(sigma);
        self
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nonnegative weights over strongly convex risks give a convex objective.
    pub fn is_convex(&self) -> bool {
        self.weights.iter().all(|&w| w >= 0.0)
    }
}

impl Objective for CombinedRisk<'_> {
    fn dim(&self) -> usize {
        self.envs.first().map_or(0, |e| e.dim())
    }

    fn value(&self, x: &[f64]) -> f64 {
        let v = weighted_risk(x, &self.weights, self.envs);
        match &self.linear {
            Some(s) => v - crate::linalg::dot(s, x),
            None => v,
        }
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (env, &w) in self.envs.iter().zip(&self.weights) {
            if w != 0.0 {
                env.add_gradient(x, w, out);
            }
        }
        if let Some(s) = &self.linear {
            crate::linalg::axpy(-1.0, s, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Environment, QuadraticRisk};

    fn pair() -> Vec<Environment> {
        vec![
            Environment::quadratic(0, QuadraticRisk::scalar(1.0, 1.0, 0.0).unwrap()).unwrap(),
            Environment::quadratic(1, QuadraticRisk::scalar(1.0, -1.0, 0.0).unwrap()).unwrap(),
        ]
    }

    /// Environments whose risks at β = 0 are the given constants.
    fn constant_risks(values: &[f64]) -> Vec<Environment> {
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| Environment::quadratic(i, QuadraticRisk::scalar(1.0, 0.0, v).unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn mixture_risk_examples() {
        let envs = constant_risks(&[2.0, 4.0]);
        let half = MixturePlay::convex(vec![0.5, 0.5]).unwrap();
        assert_eq!(mixture_risk(&[0.0], &half, &envs).unwrap(), 3.0);
        assert_eq!(mixture_risk(&[0.0], &MixturePlay::vertex(2, 0), &envs).unwrap(), 2.0);

        // Oracle: the vertices of {Σλ = 1, λ ≥ −0.5} in two dimensions are
        // (−0.5, 1.5) and (1.5, −0.5); the first evaluates to −0.5 + 4.5.
        let envs = constant_risks(&[1.0, 3.0]);
        let v = MixturePlay::affine(vec![-0.5, 1.5], 0.5).unwrap();
        assert_eq!(mixture_risk(&[0.0], &v, &envs).unwrap(), 4.0);
    }

    #[test]
    fn mixture_gradient_examples() {
        let envs = pair();
        let half = MixturePlay::convex(vec![0.5, 0.5]).unwrap();
        assert_eq!(mixture_gradient(&[0.0], &half, &envs).unwrap(), vec![0.0]);
        assert_eq!(mixture_gradient(&[0.0], &MixturePlay::vertex(2, 0), &envs).unwrap(), vec![-2.0]);

        let affine = MixturePlay::affine(vec![-0.5, 1.5], 0.5).unwrap();
        let g = mixture_gradient(&[0.0], &affine, &envs).unwrap();
        let h = 1e-6;
        let fd = (mixture_risk(&[h], &affine, &envs).unwrap() - mixture_risk(&[-h], &affine, &envs).unwrap())
            / (2.0 * h);
        assert!((fd - 4.0).abs() < 1e-6);
        assert_eq!(g, vec![4.0]);
    }

    #[test]
    fn region_validation() {
        assert!(MixturePlay::convex(vec![1.2, -0.2]).is_err());
        assert!(MixturePlay::convex(vec![0.6, 0.6]).is_err());
        assert!(MixturePlay::affine(vec![1.5, -0.5], 0.5).is_ok());
        assert!(MixturePlay::affine(vec![1.6, -0.6], 0.5).is_err());
        assert!(MixturePlay::affine(vec![0.5, 0.5], 0.0).is_err());
        assert!(Region::Affine { alpha: 0.5 }.admits(&[0.25, 0.75]));
    }

    #[test]
    fn shape_errors_are_structured() {
        let envs = pair();
        let three = MixturePlay::convex(vec![0.2, 0.3, 0.5]).unwrap();
        assert!(matches!(
            mixture_risk(&[0.0], &three, &envs),
            Err(Error::DimensionMismatch { .. })
        ));
        let half = MixturePlay::convex(vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            mixture_gradient(&[0.0, 1.0], &half, &envs),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
