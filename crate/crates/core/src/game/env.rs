use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

/// Expected loss `R^e(β)` of one environment, with its analytic gradient.
pub trait Risk: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn value(&self, beta: &[f64]) -> f64;
    /// Accumulates `weight · ∇R(β)` into `out`.
    fn add_gradient(&self, beta: &[f64], weight: f64, out: &mut [f64]);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvKind {
    AnalyticQuadratic,
    SampleBased,
    CustomAnalytic,
}

/// `½(β − μ)ᵀQ(β − μ) + c` with `Q` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticRisk {
    dim: usize,
    q: Vec<f64>,
    mu: Vec<f64>,
    c: f64,
}

impl QuadraticRisk {
    pub fn new(q: Vec<Vec<f64>>, mu: Vec<f64>, c: f64) -> Result<Self> {
        let dim = mu.len();
        if dim == 0 || q.len() != dim || q.iter().any(|row| row.len() != dim) {
            return Err(Error::InvalidInput(format!(
                "quadratic risk needs a {dim}x{dim} matrix matching mu"
            )));
        }
        for i in 0..dim {
            for j in 0..i {
                let (a, b) = (q[i][j], q[j][i]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidInput(format!("Q is not symmetric at ({i},{j})")));
                }
            }
        }
        let risk = QuadraticRisk {
            dim,
            q: q.into_iter().flatten().collect(),
            mu,
            c,
        };
        let (lo, _) = risk.eigen_bounds();
        if !(lo > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Q must be positive definite (smallest eigenvalue {lo:.3e})"
            )));
        }
        Ok(risk)
    }

    /// `scale · (β − μ)²` in one dimension, plus `c`.
    pub fn scalar(scale: f64, mu: f64, c: f64) -> Result<Self> {
        Self::new(vec![vec![2.0 * scale]], vec![mu], c)
    }

    /// Extreme eigenvalues of `Q`: the strong-convexity and smoothness moduli.
    pub fn eigen_bounds(&self) -> (f64, f64) {
        let m = DMatrix::from_row_slice(self.dim, self.dim, &self.q);
        let eig = SymmetricEigen::new(m).eigenvalues;
        let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    pub fn minimizer(&self) -> &[f64] {
        &self.mu
    }

    pub fn matrix_entry(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.dim + j]
    }

    fn q_times(&self, v: &[f64], out: &mut [f64], weight: f64) {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.q[i * self.dim..(i + 1) * self.dim];
            *o += weight * row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        }
    }
}

impl Risk for QuadraticRisk {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, beta: &[f64]) -> f64 {
        let d = self.dim;
        let mut acc = 0.0;
        for i in 0..d {
            let di = beta[i] - self.mu[i];
            let row = &self.q[i * d..(i + 1) * d];
            let mut s = 0.0;
            for j in 0..d {
                s += row[j] * (beta[j] - self.mu[j]);
            }
            acc += di * s;
        }
        0.5 * acc + self.c
    }

    fn add_gradient(&self, beta: &[f64], weight: f64, out: &mut [f64]) {
        let diff: Vec<f64> = beta.iter().zip(&self.mu).map(|(b, m)| b - m).collect();
        self.q_times(&diff, out, weight);
    }
}

/// Univariate polynomial `Σ_k a_k β^k`; coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialRisk {
    coefficients: Vec<f64>,
}

impl PolynomialRisk {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("polynomial needs finite coefficients".into()));
        }
        Ok(PolynomialRisk { coefficients })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    fn derivative_coefficients(c: &[f64]) -> Vec<f64> {
        c.iter().enumerate().skip(1).map(|(k, a)| k as f64 * a).collect()
    }

    fn horner(c: &[f64], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, a| acc * x + a)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let d = Self::derivative_coefficients(&self.coefficients);
        Self::horner(&d, x)
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        let d2 = Self::derivative_coefficients(&Self::derivative_coefficients(&self.coefficients));
        Self::horner(&d2, x)
    }

    /// Bounds of `p''` on `[lo, hi]` (curvature moduli) and of `|p'|`
    /// (Lipschitz constant), from a dense sweep plus endpoints.
    pub fn interval_bounds(&self, lo: f64, hi: f64) -> (f64, f64, f64) {
        let n = 20_000;
        let mut smin = f64::INFINITY;
        let mut smax = f64::NEG_INFINITY;
        let mut lip: f64 = 0.0;
        for i in 0..=n {
            let x = lo + (hi - lo) * (i as f64 / n as f64);
            let s = self.second_derivative(x);
            smin = smin.min(s);
            smax = smax.max(s);
            lip = lip.max(self.derivative(x).abs());
        }
        (smin, smax, lip)
    }
}

impl Risk for PolynomialRisk {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, beta: &[f64]) -> f64 {
        Self::horner(&self.coefficients, beta[0])
    }

    fn add_gradient(&self, beta: &[f64], weight: f64, out: &mut [f64]) {
        out[0] += weight * self.derivative(beta[0]);
    }
}

type ValueFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradFn = dyn Fn(&[f64], &mut [f64]) + Send + Sync;

/// Risk given by arbitrary closures.
#[derive(Clone)]
pub struct AnalyticRisk {
    dim: usize,
    label: String,
    value: Arc<ValueFn>,
    gradient: Arc<GradFn>,
}

impl AnalyticRisk {
    /// `gradient` writes `∇R(β)` into its output slice.
    pub fn new(
        dim: usize,
        label: impl Into<String>,
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Self {
        AnalyticRisk {
            dim,
            label: label.into(),
            value: Arc::new(value),
            gradient: Arc::new(gradient),
        }
    }
}

impl fmt::Debug for AnalyticRisk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticRisk")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .finish()
    }
}

impl Risk for AnalyticRisk {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, beta: &[f64]) -> f64 {
        (self.value)(beta)
    }

    fn add_gradient(&self, beta: &[f64], weight: f64, out: &mut [f64]) {
        let mut g = vec![0.0; self.dim];
        (self.gradient)(beta, &mut g);
        crate::linalg::axpy(weight, &g, out);
    }
}

#[derive(Debug)]
struct ScaledRisk {
    inner: Arc<dyn Risk>,
    factor: f64,
}

impl Risk for ScaledRisk {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, beta: &[f64]) -> f64 {
        self.factor * self.inner.value(beta)
    }

    fn add_gradient(&self, beta: &[f64], weight: f64, out: &mut [f64]) {
        self.inner.add_gradient(beta, weight * self.factor, out);
    }
}

/// One training environment: its risk plus curvature metadata.
#[derive(Debug, Clone)]
pub struct Environment {
    id: usize,
    kind: EnvKind,
    risk: Arc<dyn Risk>,
    sample: Option<Arc<super::SampleRisk>>,
    sigma_min: f64,
    sigma_max: f64,
    lipschitz_bound: Option<f64>,
}

impl Environment {
    pub fn new(
        id: usize,
        kind: EnvKind,
        risk: Arc<dyn Risk>,
        sigma_min: f64,
        sigma_max: f64,
    ) -> Result<Self> {
        if !(sigma_min > 0.0) || !(sigma_max >= sigma_min) || !sigma_max.is_finite() {
            return Err(Error::InvalidInput(format!(
                "environment {id}: need 0 < sigma_min <= sigma_max, got ({sigma_min}, {sigma_max})"
            )));
        }
        Ok(Environment {
            id,
            kind,
            risk,
            sample: None,
            sigma_min,
            sigma_max,
            lipschitz_bound: None,
        })
    }

    /// Curvature bounds come straight from the eigenvalues of `Q`.
    pub fn quadratic(id: usize, risk: QuadraticRisk) -> Result<Self> {
        let (lo, hi) = risk.eigen_bounds();
        Self::new(id, EnvKind::AnalyticQuadratic, Arc::new(risk), lo, hi)
    }

    pub fn custom(id: usize, risk: impl Risk + 'static, sigma_min: f64, sigma_max: f64) -> Result<Self> {
        Self::new(id, EnvKind::CustomAnalytic, Arc::new(risk), sigma_min, sigma_max)
    }

    pub fn sample_based(id: usize, risk: super::SampleRisk, sigma_min: f64, sigma_max: f64) -> Result<Self> {
        let risk = Arc::new(risk);
        let mut env = Self::new(id, EnvKind::SampleBased, risk.clone(), sigma_min, sigma_max)?;
        env.sample = Some(risk);
        Ok(env)
    }

    pub fn with_lipschitz_bound(mut self, bound: f64) -> Self {
        self.lipschitz_bound = Some(bound);
        self
    }

    /// The same environment with every risk value multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) {
            return Err(Error::InvalidInput(format!("scale factor must be positive, got {factor}")));
        }
        Ok(Environment {
            id: self.id,
            kind: self.kind,
            risk: Arc::new(ScaledRisk {
                inner: self.risk.clone(),
                factor,
            }),
            sample: None,
            sigma_min: self.sigma_min * factor,
            sigma_max: self.sigma_max * factor,
            lipschitz_bound: self.lipschitz_bound.map(|g| g * factor),
        })
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn kind(&self) -> EnvKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.risk.dim()
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma_max
    }

    pub fn lipschitz_bound(&self) -> Option<f64> {
        self.lipschitz_bound
    }

    pub fn sample_risk(&self) -> Option<&super::SampleRisk> {
        self.sample.as_deref()
    }

    pub fn risk(&self, beta: &[f64]) -> f64 {
        self.risk.value(beta)
    }

    pub fn gradient(&self, beta: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        self.risk.add_gradient(beta, 1.0, &mut g);
        g
    }

    pub fn add_gradient(&self, beta: &[f64], weight: f64, out: &mut [f64]) {
        self.risk.add_gradient(beta, weight, out);
    }
}
