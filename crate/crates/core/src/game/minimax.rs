use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_environments, Environment, ParamSpace};
use crate::error::Result;
use crate::optim::{default_grid_step, projected_descent, GlobalSearch, Objective, DEFAULT_STARTS};
use crate::tolerance::Tolerances;

/// Samples per multi-start seed when no grid is available.
const SAMPLES_PER_START: usize = 256;

/// `min_β max_k Σ_e w_{k,e} R^e(β)` over a finite family of weightings.
///
/// A grid (or random sample above dimension 3) locates the basin; a
/// log-sum-exp smoothing with shrinking temperature then polishes the point.
/// Returns the minimizer and the exact max-value there.
pub fn minimize_worst_case(
    envs: &[Environment],
    space: &ParamSpace,
    pieces: &[Vec<f64>],
    search: GlobalSearch,
    tol: &Tolerances,
) -> Result<(Vec<f64>, f64)> {
    check_environments(envs, space)?;
    let worst = WorstCase { envs, pieces };
    let dim = space.dim();

    let mut best = (space.default_initial_point(), f64::INFINITY);
    let consider = |p: &[f64], best: &mut (Vec<f64>, f64)| {
        let v = worst.exact(p);
        if v < best.1 {
            best.0.copy_from_slice(p);
            best.1 = v;
        }
    };
    let grid_step = match search {
        GlobalSearch::Grid { step } => Some(step),
        GlobalSearch::Auto if dim <= 3 => Some(default_grid_step(dim)),
        _ => None,
    };
    if let Some(mut step) = grid_step {
        while space.grid_size(step) > crate::optim::MAX_GRID_POINTS {
            step *= 1.5;
        }
        space.for_each_grid_point(step, |p| consider(p, &mut best));
    } else {
        let starts = match search {
            GlobalSearch::MultiStart { starts } => starts,
            _ => DEFAULT_STARTS,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d69_6e69_6d61_78);
        for v in space.seed_vertices() {
            consider(&v, &mut best);
        }
        for _ in 0..starts * SAMPLES_PER_START {
            let p = space.sample(&mut rng);
            consider(&p, &mut best);
        }
    }

    let scale = best.1.abs().max(1.0);
    let mut x = best.0.clone();
    let mut tau = 1e-2 * scale;
    while tau >= 1e-11 * scale {
        let smooth = Smoothed { worst: &worst, tau };
        x = projected_descent(&smooth, space, &x, tol.gradient, 2_000).argmin;
        tau *= 0.1;
    }
    let refined = worst.exact(&x);
    if refined < best.1 {
        best = (x, refined);
    }
    Ok(best)
}

struct WorstCase<'a> {
    envs: &'a [Environment],
    pieces: &'a [Vec<f64>],
}

impl WorstCase<'_> {
    fn piece_values(&self, x: &[f64]) -> Vec<f64> {
        let risks: Vec<f64> = self.envs.iter().map(|e| e.risk(x)).collect();
        self.pieces.iter().map(|w| crate::linalg::dot(w, &risks)).collect()
    }

    fn exact(&self, x: &[f64]) -> f64 {
        self.piece_values(x).into_iter().fold(f64::NEG_INFINITY, f64::max)
    }
}

struct Smoothed<'a> {
    worst: &'a WorstCase<'a>,
    tau: f64,
}

impl Smoothed<'_> {
    fn softmax(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let v = self.worst.piece_values(x);
        let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = v.iter().map(|vi| ((vi - m) / self.tau).exp()).collect();
        let z: f64 = e.iter().sum();
        (m + self.tau * z.ln(), e.into_iter().map(|ei| ei / z).collect())
    }
}

impl Objective for Smoothed<'_> {
    fn dim(&self) -> usize {
        self.worst.envs[0].dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.softmax(x).0
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let (_, p) = self.softmax(x);
        out.fill(0.0);
        let mut env_weights = vec![0.0; self.worst.envs.len()];
        for (pk, w) in p.iter().zip(self.worst.pieces) {
            crate::linalg::axpy(*pk, w, &mut env_weights);
        }
        for (env, w) in self.worst.envs.iter().zip(&env_weights) {
            if *w != 0.0 {
                env.add_gradient(x, *w, out);
            }
        }
    }
}

/// Identity rows: one piece per environment.
pub fn vertex_pieces(count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let mut v = vec![0.0; count];
            v[i] = 1.0;
            v
        })
        .collect()
}
