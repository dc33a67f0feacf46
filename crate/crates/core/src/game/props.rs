//! One-shot equivalences: the convex-hull game reduces to its vertices, and
//! the bounded-affine game reduces to a fixed average-plus-worst-case mix.

use serde::Serialize;

use super::minimax::{minimize_worst_case, vertex_pieces};
use super::{Environment, MixturePlay, ParamSpace};
use crate::error::{Error, Result};
use crate::optim::GlobalSearch;
use crate::tolerance::Tolerances;

/// Step of the coefficient grid over `Δ_E` used for the hull side.
const HULL_STEP: f64 = 0.05;
const MAX_HULL_POINTS: f64 = 50_000.0;

#[derive(Debug, Clone, Serialize)]
pub struct Prop1Check {
    pub value_hull: f64,
    pub value_vertices: f64,
    pub beta_hull: Vec<f64>,
    pub beta_vertices: Vec<f64>,
}

impl Prop1Check {
    pub fn deviation(&self) -> f64 {
        (self.value_hull - self.value_vertices).abs()
    }
}

/// One-shot minimax value against the whole simplex (via a dense
/// coefficient grid) and against the environments alone.
pub fn check_prop1(envs: &[Environment], space: &ParamSpace, tol: &Tolerances) -> Result<Prop1Check> {
    if envs.is_empty() {
        return Err(Error::InvalidInput("check_prop1 needs at least one environment".into()));
    }
    let e = envs.len();
    let mut step = HULL_STEP;
    let simplex = ParamSpace::simplex(e)?;
    while simplex.grid_size(step) > MAX_HULL_POINTS {
        step *= 1.25;
    }
    let mut hull = Vec::new();
    simplex.for_each_grid_point(step, |p| hull.push(p.to_vec()));

    let (beta_hull, value_hull) = minimize_worst_case(envs, space, &hull, GlobalSearch::Auto, tol)?;
    let (beta_vertices, value_vertices) =
        minimize_worst_case(envs, space, &vertex_pieces(e), GlobalSearch::Auto, tol)?;
    Ok(Prop1Check {
        value_hull,
        value_vertices,
        beta_hull,
        beta_vertices,
    })
}

/// Worst bounded-affine reweighting of fixed risks, computed twice: by
/// enumerating the vertices of `{Σλ = 1, λ ≥ −α}` (lhs) and by the closed
/// form `max_e (1 + Eα)·r_e − α·Σ r` (rhs).
pub fn check_prop2(risks: &[f64], alpha: f64) -> Result<(f64, f64)> {
    Ok((affine_vertex_max(risks, alpha)?, affine_closed_form(risks, alpha)?))
}

pub(crate) fn affine_vertex_max(risks: &[f64], alpha: f64) -> Result<f64> {
    let e = risks.len();
    if e == 0 || e > 24 {
        return Err(Error::InvalidInput(format!("vertex enumeration supports 1..=24 risks, got {e}")));
    }
    // A vertex pins E − 1 coordinates at −α; the sum constraint fixes the rest.
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << e) {
        if mask.count_ones() as usize != e - 1 {
            continue;
        }
        let pinned = -alpha * (e - 1) as f64;
        let coefficients: Vec<f64> = (0..e)
            .map(|i| if mask >> i & 1 == 1 { -alpha } else { 1.0 - pinned })
            .collect();
        let Ok(vertex) = MixturePlay::affine(coefficients, alpha) else {
            continue;
        };
        let value = crate::linalg::dot(vertex.coefficients(), risks);
        best = best.max(value);
    }
    Ok(best)
}

pub(crate) fn affine_closed_form(risks: &[f64], alpha: f64) -> Result<f64> {
    if risks.is_empty() || !(alpha > 0.0) {
        return Err(Error::InvalidInput("need risks and alpha > 0".into()));
    }
    let e = risks.len() as f64;
    let total: f64 = risks.iter().sum();
    Ok(risks
        .iter()
        .map(|r| (1.0 + e * alpha) * r - alpha * total)
        .fold(f64::NEG_INFINITY, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::QuadraticRisk;

    fn q(mu: f64, c: f64) -> Environment {
        Environment::quadratic(0, QuadraticRisk::scalar(1.0, mu, c).unwrap()).unwrap()
    }

    #[test]
    fn prop2_examples() {
        assert_eq!(check_prop2(&[1.0, 3.0], 0.5).unwrap(), (4.0, 4.0));
        assert_eq!(check_prop2(&[0.0, 1.0], 1.0).unwrap(), (2.0, 2.0));
        let (l, r) = check_prop2(&[2.5, 2.5, 2.5], 0.3).unwrap();
        assert!((l - 2.5).abs() < 1e-12 && (r - 2.5).abs() < 1e-12);
    }

    #[test]
    fn prop1_symmetric_pair() {
        // 1-D grid oracle with step 1e-4: max((β−1)², (β+1)²) is minimized at 0 with value 1.
        let oracle = (0..=40_000)
            .map(|i| -2.0 + 4.0 * i as f64 / 40_000.0)
            .map(|b: f64| (b - 1.0).powi(2).max((b + 1.0).powi(2)))
            .fold(f64::INFINITY, f64::min);
        assert!((oracle - 1.0).abs() < 1e-12);

        let envs = vec![q(1.0, 0.0), q(-1.0, 0.0)];
        let space = ParamSpace::interval(-2.0, 2.0);
        let c = check_prop1(&envs, &space, &Tolerances::default()).unwrap();
        assert!((c.value_vertices - oracle).abs() < 1e-6);
        assert!(c.deviation() < 1e-6);
        assert!(c.beta_vertices[0].abs() < 1e-6);
    }

    #[test]
    fn prop1_degenerate_hulls() {
        let space = ParamSpace::interval(-2.0, 2.0);
        let tol = Tolerances::default();
        let single = check_prop1(&[q(0.5, 1.0)], &space, &tol).unwrap();
        assert!((single.value_vertices - 1.0).abs() < 1e-9);
        assert!((single.value_hull - 1.0).abs() < 1e-9);

        let same = check_prop1(&[q(0.5, 1.0), q(0.5, 1.0)], &space, &tol).unwrap();
        assert!((same.value_vertices - 1.0).abs() < 1e-9);
        assert!(same.deviation() < 1e-9);
    }
}
