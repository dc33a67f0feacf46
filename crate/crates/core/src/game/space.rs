use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dist, norm};
use crate::optim::project_simplex;

/// Convex feasible set for the player's parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamSpace {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Simplex { dim: usize },
}

impl ParamSpace {
    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidInput(format!(
                "box bounds must be non-empty and equally long (lo {}, hi {})",
                lo.len(),
                hi.len()
            )));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l <= h) || !l.is_finite() || !h.is_finite()) {
            return Err(Error::InvalidInput("box requires finite lo <= hi on every axis".into()));
        }
        Ok(ParamSpace::Box { lo, hi })
    }

    /// One-dimensional box `[lo, hi]`.
    ///
    /// # Panics
    /// If `lo > hi` or either bound is not finite.
    pub fn interval(lo: f64, hi: f64) -> Self {
        Self::boxed(vec![lo], vec![hi]).expect("invalid interval")
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput("ball needs a non-empty center and radius > 0".into()));
        }
        Ok(ParamSpace::Ball { center, radius })
    }

    pub fn simplex(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("simplex dimension must be >= 1".into()));
        }
        Ok(ParamSpace::Simplex { dim })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ParamSpace::Box { lo, hi } => Self::boxed(lo.clone(), hi.clone()).map(|_| ()),
            ParamSpace::Ball { center, radius } => Self::ball(center.clone(), *radius).map(|_| ()),
            ParamSpace::Simplex { dim } => Self::simplex(*dim).map(|_| ()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ParamSpace::Box { lo, .. } => lo.len(),
            ParamSpace::Ball { center, .. } => center.len(),
            ParamSpace::Simplex { dim } => *dim,
        }
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ParamSpace::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (l, h))| v.clamp(*l, *h))
                .collect(),
            ParamSpace::Ball { center, radius } => {
                let r = dist(x, center);
                if r <= *radius {
                    x.to_vec()
                } else {
                    let scale = radius / r;
                    x.iter()
                        .zip(center)
                        .map(|(v, c)| c + (v - c) * scale)
                        .collect()
                }
            }
            ParamSpace::Simplex { .. } => project_simplex(x),
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            ParamSpace::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, h))| *v >= l - tol && *v <= h + tol),
            ParamSpace::Ball { center, radius } => dist(x, center) <= radius + tol,
            ParamSpace::Simplex { .. } => {
                x.iter().all(|&v| v >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            ParamSpace::Box { lo, hi } => dist(lo, hi),
            ParamSpace::Ball { radius, .. } => 2.0 * radius,
            ParamSpace::Simplex { dim } => {
                if *dim > 1 {
                    std::f64::consts::SQRT_2
                } else {
                    0.0
                }
            }
        }
    }

    /// Projection of the origin; the default first-round play.
    pub fn default_initial_point(&self) -> Vec<f64> {
        self.project(&vec![0.0; self.dim()])
    }

    /// Whether `x` touches a constraint of a box or ball. Simplex plays are
    /// constrained by construction and never reported.
    pub fn is_boundary_active(&self, x: &[f64], tol: f64) -> bool {
        match self {
            ParamSpace::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .any(|(v, (l, h))| (v - l).abs() <= tol || (h - v).abs() <= tol),
            ParamSpace::Ball { center, radius } => dist(x, center) >= radius - tol,
            ParamSpace::Simplex { .. } => false,
        }
    }

    /// Vertices used as deterministic multi-start seeds: simplex corners,
    /// box corners up to dimension 10, nothing for balls.
    pub fn seed_vertices(&self) -> Vec<Vec<f64>> {
        match self {
            ParamSpace::Simplex { dim } => (0..*dim)
                .map(|i| {
                    let mut v = vec![0.0; *dim];
                    v[i] = 1.0;
                    v
                })
                .collect(),
            ParamSpace::Box { lo, hi } if lo.len() <= 10 => (0..1usize << lo.len())
                .map(|mask| {
                    (0..lo.len())
                        .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                        .collect()
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            ParamSpace::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(l, h)| if l == h { *l } else { rng.random_range(*l..=*h) })
                .collect(),
            ParamSpace::Ball { center, radius } => {
                let d = center.len();
                let dir: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
                let n = norm(&dir).max(f64::MIN_POSITIVE);
                let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
                center.iter().zip(&dir).map(|(c, u)| c + r * u / n).collect()
            }
            ParamSpace::Simplex { dim } => {
                let e: Vec<f64> = (0..*dim).map(|_| Exp1.sample(rng)).collect();
                let s: f64 = e.iter().sum();
                e.into_iter().map(|v| v / s).collect()
            }
        }
    }

    /// Number of points `for_each_grid_point` would visit at `step`.
    pub fn grid_size(&self, step: f64) -> f64 {
        match self {
            ParamSpace::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(l, h)| axis_divisions(*l, *h, step) as f64 + 1.0)
                .product(),
            ParamSpace::Ball { center, radius } => {
                let per_axis = axis_divisions(-radius, *radius, step) as f64 + 1.0;
                per_axis.powi(center.len() as i32)
            }
            ParamSpace::Simplex { dim } => {
                // C(N + d - 1, d - 1)
                let n = (1.0 / step).round().max(1.0);
                let mut c = 1.0;
                for k in 1..*dim {
                    c *= (n + k as f64) / k as f64;
                }
                c
            }
        }
    }

    /// Visits a regular grid over the set in lexicographically ascending
    /// order. Simplex grids use the lattice of multiples of `1/round(1/step)`.
    pub fn for_each_grid_point(&self, step: f64, mut visit: impl FnMut(&[f64])) {
        match self {
            ParamSpace::Box { lo, hi } => {
                let axes: Vec<Vec<f64>> = lo.iter().zip(hi).map(|(l, h)| axis(*l, *h, step)).collect();
                for_each_product(&axes, &mut visit);
            }
            ParamSpace::Ball { center, radius } => {
                let axes: Vec<Vec<f64>> = center
                    .iter()
                    .map(|c| axis(c - radius, c + radius, step))
                    .collect();
                let r2 = radius * radius * (1.0 + 1e-12);
                for_each_product(&axes, &mut |p: &[f64]| {
                    if crate::linalg::dist_sq(p, center) <= r2 {
                        visit(p);
                    }
                });
            }
            ParamSpace::Simplex { dim } => {
                let n = (1.0 / step).round().max(1.0) as usize;
                let mut counts = vec![0usize; *dim];
                let mut point = vec![0.0; *dim];
                simplex_lattice(0, n, n, &mut counts, &mut point, &mut visit);
            }
        }
    }
}

fn axis_divisions(lo: f64, hi: f64, step: f64) -> usize {
    if hi <= lo {
        0
    } else {
        ((hi - lo) / step).round().max(1.0) as usize
    }
}

/// Evenly spaced points including both endpoints, computed as
/// `lo + (hi - lo) * i / n` so the grid is symmetric on symmetric intervals.
fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = axis_divisions(lo, hi, step);
    if n == 0 {
        return vec![lo];
    }
    (0..=n).map(|i| lo + (hi - lo) * (i as f64 / n as f64)).collect()
}

fn for_each_product(axes: &[Vec<f64>], visit: &mut dyn FnMut(&[f64])) {
    let d = axes.len();
    let mut idx = vec![0usize; d];
    let mut point: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    loop {
        visit(&point);
        let mut k = d;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                point[k] = axes[k][idx[k]];
                break;
            }
            idx[k] = 0;
            point[k] = axes[k][0];
        }
    }
}

fn simplex_lattice(
    pos: usize,
    remaining: usize,
    n: usize,
    counts: &mut [usize],
    point: &mut [f64],
    visit: &mut dyn FnMut(&[f64]),
) {
    let d = counts.len();
    if pos + 1 == d {
        counts[pos] = remaining;
        point[pos] = remaining as f64 / n as f64;
        visit(point);
        return;
    }
    for k in 0..=remaining {
        counts[pos] = k;
        point[pos] = k as f64 / n as f64;
        simplex_lattice(pos + 1, remaining - k, n, counts, point, visit);
    }
}
