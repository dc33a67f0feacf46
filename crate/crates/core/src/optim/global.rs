use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{projected_descent, Objective, SolverReport};
use crate::error::{Error, Result};
use crate::game::ParamSpace;
use crate::tolerance::Tolerances;

/// Default number of random multi-start seeds above dimension 3.
pub const DEFAULT_STARTS: usize = 64;

/// Grids larger than this are coarsened before evaluation.
pub const MAX_GRID_POINTS: f64 = 4.0e6;

const MULTISTART_SEED: u64 = 0x6d75_6c74_6973_7472;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GlobalSearch {
    /// Grid with the default step when `dim <= 3`, multi-start otherwise.
    Auto,
    Grid { step: f64 },
    MultiStart { starts: usize },
}

pub fn default_grid_step(dim: usize) -> f64 {
    if dim <= 2 {
        1e-3
    } else {
        1e-2
    }
}

/// Brute-force global minimization for the non-convex hindsight problems
/// that affine reweighting produces.
///
/// Grid ties resolve to the lexicographically smallest point; multi-start
/// ties resolve the same way over the local minima found.
pub fn global_min_grid(
    obj: &dyn Objective,
    space: &ParamSpace,
    search: GlobalSearch,
    refine: bool,
    tol: &Tolerances,
) -> Result<SolverReport> {
    let dim = space.dim();
    if obj.dim() != dim {
        return Err(Error::DimensionMismatch {
            context: "global_min_grid",
            expected: dim,
            found: obj.dim(),
        });
    }
    let search = match search {
        GlobalSearch::Auto if dim <= 3 => GlobalSearch::Grid {
            step: default_grid_step(dim),
        },
        GlobalSearch::Auto => GlobalSearch::MultiStart {
            starts: DEFAULT_STARTS,
        },
        other => other,
    };

    match search {
        GlobalSearch::Grid { step } => {
            if dim > 3 {
                return Err(Error::GridDimension(dim));
            }
            if !(step > 0.0) {
                return Err(Error::InvalidInput(format!("grid step must be positive, got {step}")));
            }
            Ok(grid_search(obj, space, step, refine, tol))
        }
        GlobalSearch::MultiStart { starts } => Ok(multi_start(obj, space, starts, tol)),
        GlobalSearch::Auto => unreachable!(),
    }
}

fn grid_search(
    obj: &dyn Objective,
    space: &ParamSpace,
    step: f64,
    refine: bool,
    tol: &Tolerances,
) -> SolverReport {
    let mut step = step;
    while space.grid_size(step) > MAX_GRID_POINTS {
        step *= 1.5;
    }

    let mut best_value = f64::INFINITY;
    let mut best_point = space.default_initial_point();
    let mut evaluated = 0usize;
    space.for_each_grid_point(step, |p| {
        evaluated += 1;
        let v = obj.value(p);
        if v < best_value {
            best_value = v;
            best_point.copy_from_slice(p);
        }
    });

    let grid_report = SolverReport {
        argmin: best_point,
        value: best_value,
        grad_norm_at_solution: f64::NAN,
        iterations: evaluated,
        converged: best_value.is_finite(),
    };
    if !refine {
        return grid_report;
    }

    let mut local = projected_descent(obj, space, &grid_report.argmin, tol.gradient, tol.max_iterations);
    local.iterations += evaluated;
    if local.value <= grid_report.value {
        local
    } else {
        // Descent never increases the value beyond rounding slack; keep the
        // grid point but report the local residual.
        SolverReport {
            grad_norm_at_solution: local.grad_norm_at_solution,
            converged: local.converged,
            ..grid_report
        }
    }
}

fn multi_start(obj: &dyn Objective, space: &ParamSpace, starts: usize, tol: &Tolerances) -> SolverReport {
    let mut rng = ChaCha8Rng::seed_from_u64(MULTISTART_SEED);
    let mut seeds = space.seed_vertices();
    seeds.push(space.default_initial_point());
    for k in 0..starts {
        let mut p = space.sample(&mut rng);
        // Alternate dense draws with sparse ones: for simplex problems the
        // interesting minima sit on low-dimensional faces.
        if k % 2 == 1 && matches!(space, ParamSpace::Simplex { .. }) && p.len() > 2 {
            let keep = rng.random_range(1..p.len());
            let mut order: Vec<usize> = (0..p.len()).collect();
            for i in 0..keep {
                let j = rng.random_range(i..p.len());
                order.swap(i, j);
            }
            let mut sparse = vec![0.0; p.len()];
            for &i in &order[..keep] {
                sparse[i] = 1.0 / keep as f64;
            }
            p = sparse;
        }
        seeds.push(p);
    }

    let mut best: Option<SolverReport> = None;
    let mut total_iterations = 0;
    for seed in &seeds {
        let r = projected_descent(obj, space, seed, tol.gradient, tol.max_iterations);
        total_iterations += r.iterations;
        let better = match &best {
            None => true,
            Some(b) => r.value < b.value || (r.value == b.value && r.argmin < b.argmin),
        };
        if better {
            best = Some(r);
        }
    }
    let mut best = best.expect("multi-start always has at least one seed");
    best.iterations = total_iterations;
    best
}
