//! Solvers shared by players, adversaries and the hindsight oracle.
//!
//! Everything here works on the [`Objective`] trait: a value and an
//! analytic gradient. No automatic differentiation is attempted; environment
//! constructors supply their gradients.

mod descent;
mod gconst;
mod global;
mod simplex;

pub use descent::{minimize_convex, projected_descent};
pub use gconst::{forceable_gradient_g, GConstant, RateConstants};
pub use global::{default_grid_step, global_min_grid, GlobalSearch, DEFAULT_STARTS, MAX_GRID_POINTS};
pub use simplex::project_simplex;

use serde::Serialize;

pub trait Objective: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    /// Writes the gradient at `x` into `out` (overwriting it).
    fn gradient(&self, x: &[f64], out: &mut [f64]);
}

/// An objective assembled from a pair of closures.
pub struct FnObjective<F, G> {
    dim: usize,
    f: F,
    g: G,
}

impl<F, G> FnObjective<F, G>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64], &mut [f64]) + Sync,
{
    pub fn new(dim: usize, f: F, g: G) -> Self {
        FnObjective { dim, f, g }
    }
}

impl<F, G> Objective for FnObjective<F, G>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64], &mut [f64]) + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        (self.g)(x, out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverReport {
    pub argmin: Vec<f64>,
    pub value: f64,
    /// Projected-gradient residual `‖x − P(x − ∇f(x))‖`; equals the plain
    /// gradient norm at interior points.
    pub grad_norm_at_solution: f64,
    pub iterations: usize,
    pub converged: bool,
}
