use super::{Objective, SolverReport};
use crate::game::ParamSpace;
use crate::linalg::{dist, dot};
use crate::tolerance::Tolerances;

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-40;
const MAX_STEP: f64 = 1e12;

/// Projected gradient descent with Barzilai–Borwein trial steps and halving
/// backtracking along the projection arc.
///
/// Works on non-convex objectives as a local method; the report is flagged
/// converged once the projected residual drops below `gradient_tol`.
pub fn projected_descent(
    obj: &dyn Objective,
    space: &ParamSpace,
    init: &[f64],
    gradient_tol: f64,
    max_iterations: usize,
) -> SolverReport {
    let d = obj.dim();
    let mut x = space.project(init);
    let mut fx = obj.value(&x);
    let mut g = vec![0.0; d];
    obj.gradient(&x, &mut g);

    let mut step = 1.0;
    let mut trial = vec![0.0; d];
    let mut g_new = vec![0.0; d];
    let mut residual = projected_residual(space, &x, &g, &mut trial);
    let mut iterations = 0;

    while residual > gradient_tol && iterations < max_iterations {
        iterations += 1;
        let slack = 1e-14 * fx.abs().max(1.0);
        let mut accepted = None;
        let mut s = step;
        while s > MIN_STEP {
            for i in 0..d {
                trial[i] = x[i] - s * g[i];
            }
            let x_new = space.project(&trial);
            let delta: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
            let decrease = dot(&g, &delta);
            if decrease >= 0.0 && delta.iter().all(|&v| v == 0.0) {
                break;
            }
            let f_new = obj.value(&x_new);
            if f_new <= fx + ARMIJO * decrease + slack {
                accepted = Some((x_new, f_new, delta));
                break;
            }
            s *= 0.5;
        }

        let Some((x_new, f_new, delta)) = accepted else {
            break;
        };

        obj.gradient(&x_new, &mut g_new);
        let dg: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let curvature = dot(&delta, &dg);
        step = if curvature > 0.0 {
            (dot(&delta, &delta) / curvature).clamp(MIN_STEP, MAX_STEP)
        } else {
            (s * 2.0).min(MAX_STEP)
        };

        x = x_new;
        fx = f_new;
        std::mem::swap(&mut g, &mut g_new);
        residual = projected_residual(space, &x, &g, &mut trial);
    }

    SolverReport {
        argmin: x,
        value: fx,
        grad_norm_at_solution: residual,
        iterations,
        converged: residual <= gradient_tol,
    }
}

fn projected_residual(space: &ParamSpace, x: &[f64], g: &[f64], buf: &mut [f64]) -> f64 {
    for i in 0..x.len() {
        buf[i] = x[i] - g[i];
    }
    dist(x, &space.project(buf))
}

/// Minimizes a strongly convex objective over `space` from `init`.
pub fn minimize_convex(
    obj: &dyn Objective,
    space: &ParamSpace,
    init: &[f64],
    tol: &Tolerances,
) -> SolverReport {
    projected_descent(obj, space, init, tol.gradient, tol.max_iterations)
}
