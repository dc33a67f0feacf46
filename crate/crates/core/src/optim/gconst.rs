use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{default_grid_step, GlobalSearch, DEFAULT_STARTS, MAX_GRID_POINTS};
use crate::error::{Error, Result};
use crate::game::{Environment, ParamSpace};
use crate::linalg::norm;

/// Random probes per multi-start seed when the grid is unavailable.
const PROBES_PER_START: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GConstant {
    pub g: f64,
    pub argmin: Vec<f64>,
    /// Set when the estimate comes from random probing rather than a grid.
    pub approximate: bool,
}

/// `min_β max_e ‖∇R^e(β)‖`.
///
/// The inner maximum over the simplex is taken at the vertices: a norm of a
/// linear combination is convex in the coefficients.
pub fn forceable_gradient_g(envs: &[Environment], space: &ParamSpace, search: GlobalSearch) -> Result<GConstant> {
    crate::game::check_environments(envs, space)?;
    let worst = |beta: &[f64]| {
        envs.iter()
            .map(|e| norm(&e.gradient(beta)))
            .fold(0.0_f64, f64::max)
    };
    let dim = space.dim();
    let mut best = GConstant {
        g: f64::INFINITY,
        argmin: space.default_initial_point(),
        approximate: false,
    };
    let consider = |p: &[f64], best: &mut GConstant| {
        let v = worst(p);
        if v < best.g {
            best.g = v;
            best.argmin.copy_from_slice(p);
        }
    };
    let step = match search {
        GlobalSearch::Grid { .. } if dim > 3 => return Err(Error::GridDimension(dim)),
        GlobalSearch::Grid { step } => Some(step),
        GlobalSearch::Auto if dim <= 3 => Some(default_grid_step(dim)),
        _ => None,
    };
    match step {
        Some(mut step) => {
            while space.grid_size(step) > MAX_GRID_POINTS {
                step *= 1.5;
            }
            space.for_each_grid_point(step, |p| consider(p, &mut best));
        }
        None => {
            let starts = match search {
                GlobalSearch::MultiStart { starts } => starts,
                _ => DEFAULT_STARTS,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(0x6763_6f6e_7374);
            for v in space.seed_vertices() {
                consider(&v, &mut best);
            }
            for _ in 0..starts * PROBES_PER_START {
                let p = space.sample(&mut rng);
                consider(&p, &mut best);
            }
            best.approximate = true;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateConstants {
    pub g: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Uniform bound on the per-round gradient norm `G_s`.
    pub lipschitz: Option<f64>,
}

impl RateConstants {
    /// Curvature bounds and `G` taken from the environments; `G` is the
    /// largest configured Lipschitz bound, absent if any environment has none.
    pub fn from_environments(envs: &[Environment], g: f64) -> Result<Self> {
        if envs.is_empty() {
            return Err(Error::InvalidInput("no environments".into()));
        }
        let sigma_min = envs.iter().map(Environment::sigma_min).fold(f64::INFINITY, f64::min);
        let sigma_max = envs.iter().map(Environment::sigma_max).fold(0.0, f64::max);
        let lipschitz = envs
            .iter()
            .map(Environment::lipschitz_bound)
            .try_fold(0.0_f64, |acc, b| b.map(|b| acc.max(b)));
        Ok(RateConstants {
            g,
            sigma_min,
            sigma_max,
            lipschitz,
        })
    }

    pub fn lower_const(&self) -> f64 {
        self.g * self.g * self.sigma_min / (16.0 * self.sigma_max * self.sigma_max)
    }

    /// `Σ_{s≤T} G²/(2sσ_min)`, or `None` without a Lipschitz bound.
    pub fn upper_harmonic(&self, horizon: usize) -> Option<f64> {
        let lipschitz = self.lipschitz?;
        let harmonic: f64 = (1..=horizon).map(|s| 1.0 / s as f64).sum();
        Some(lipschitz * lipschitz / (2.0 * self.sigma_min) * harmonic)
    }
}
