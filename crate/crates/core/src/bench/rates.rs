use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rounds before this are treated as transient and left out of fits.
pub const FIT_FROM: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateModel {
    /// `a·ln t + b`
    Logarithmic,
    /// `a·√t + b`
    Sqrt,
    /// `a·t + b`
    Linear,
}

impl RateModel {
    pub const ALL: [RateModel; 3] = [RateModel::Logarithmic, RateModel::Sqrt, RateModel::Linear];

    pub fn feature(self, t: f64) -> f64 {
        match self {
            RateModel::Logarithmic => t.ln(),
            RateModel::Sqrt => t.sqrt(),
            RateModel::Linear => t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelFit {
    pub model: RateModel,
    pub a: f64,
    pub b: f64,
    pub r_squared: f64,
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub fits: Vec<ModelFit>,
    pub selected: RateModel,
    /// Rounds actually used.
    pub from: usize,
    pub to: usize,
}

impl RateFit {
    pub fn model(&self, model: RateModel) -> &ModelFit {
        self.fits.iter().find(|f| f.model == model).expect("all models fitted")
    }
}

/// Least squares `y ≈ a·x + b`, returning `(a, b, R²)`.
///
/// A constant response has `R² = 1` if matched exactly, else 0.
pub fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let b = my - a * mx;
    (a, b, r_squared(y, x.iter().map(|xi| a * xi + b)))
}

fn r_squared(y: &[f64], fitted: impl Iterator<Item = f64>) -> f64 {
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|yi| (yi - my).powi(2)).sum();
    let ss_res: f64 = y.iter().zip(fitted).map(|(yi, fi)| (yi - fi).powi(2)).sum();
    if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res <= f64::EPSILON * y.iter().map(|v| v * v).sum::<f64>().max(1.0) {
        1.0
    } else {
        0.0
    }
}

fn fit_range(curve: &[(usize, f64)], from: usize) -> Result<Vec<(f64, f64)>> {
    let points: Vec<(f64, f64)> = curve
        .iter()
        .filter(|(t, _)| *t >= from)
        .map(|&(t, r)| (t as f64, r))
        .collect();
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "rate fit needs at least 3 points with t >= {from}, got {}",
            points.len()
        )));
    }
    if points.iter().any(|(_, r)| !r.is_finite()) {
        return Err(Error::InvalidInput("regret curve contains non-finite values".into()));
    }
    Ok(points)
}

/// Fits all three growth models over `t >= FIT_FROM` and selects the
/// highest `R²` (earlier models win exact ties).
pub fn fit_rate(curve: &[(usize, f64)]) -> Result<RateFit> {
    fit_rate_from(curve, FIT_FROM)
}

pub fn fit_rate_from(curve: &[(usize, f64)], from: usize) -> Result<RateFit> {
    let last = curve.iter().map(|(t, _)| *t).max().unwrap_or(0);
    if last < 100 {
        return Err(Error::InvalidInput(format!("rate fits need a horizon of at least 100, got {last}")));
    }
    let points = fit_range(curve, from)?;
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let mut fits: Vec<ModelFit> = RateModel::ALL
        .iter()
        .map(|&model| {
            let x: Vec<f64> = points.iter().map(|p| model.feature(p.0)).collect();
            let (a, b, r_squared) = least_squares(&x, &y);
            ModelFit {
                model,
                a,
                b,
                r_squared,
                selected: false,
            }
        })
        .collect();
    let best = (0..fits.len())
        .fold(0, |best, i| if fits[i].r_squared > fits[best].r_squared { i } else { best });
    fits[best].selected = true;
    Ok(RateFit {
        selected: fits[best].model,
        fits,
        from: points[0].0 as usize,
        to: points[points.len() - 1].0 as usize,
    })
}

/// Slope of `ln R_t` against `ln t` over `t >= from`, skipping non-positive regret.
pub fn loglog_exponent(curve: &[(usize, f64)], from: usize) -> Result<(f64, f64)> {
    let points: Vec<(f64, f64)> = fit_range(curve, from)?
        .into_iter()
        .filter(|(_, r)| *r > 0.0)
        .map(|(t, r)| (t.ln(), r.ln()))
        .collect();
    if points.len() < 2 {
        return Err(Error::InvalidInput("too few positive regret values for a log-log fit".into()));
    }
    let x: Vec<f64> = points.iter().map(|p| p.0).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (slope, _, r2) = least_squares(&x, &y);
    Ok((slope, r2))
}

/// Mean per-round increment of `R_t` over consecutive checkpoints, located
/// at the window's midpoint.
pub fn window_increments(curve: &[(usize, f64)]) -> Vec<(f64, f64)> {
    curve
        .windows(2)
        .filter(|w| w[1].0 > w[0].0)
        .map(|w| {
            let (t0, r0) = w[0];
            let (t1, r1) = w[1];
            (0.5 * (t0 + t1) as f64, (r1 - r0) / (t1 - t0) as f64)
        })
        .collect()
}

/// Fits `y ≈ c/t` through the origin; returns `(c, R²)`.
pub fn fit_inverse_t(points: &[(f64, f64)]) -> (f64, f64) {
    let num: f64 = points.iter().map(|(t, y)| y / t).sum();
    let den: f64 = points.iter().map(|(t, _)| 1.0 / (t * t)).sum();
    let c = if den > 0.0 { num / den } else { 0.0 };
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    (c, r_squared(&y, points.iter().map(|(t, _)| c / t)))
}

/// `from, 2·from, 4·from, …` capped by `to`, which is always included.
pub fn dyadic_checkpoints(from: usize, to: usize) -> Vec<usize> {
    let mut pts = Vec::new();
    let mut t = from.max(1);
    while t < to {
        pts.push(t);
        t *= 2;
    }
    pts.push(to);
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synth(f: impl Fn(f64) -> f64) -> Vec<(usize, f64)> {
        (1..=1000).map(|t| (t, f(t as f64))).collect()
    }

    #[test]
    fn selects_generating_model() {
        let log = fit_rate(&synth(|t| 0.125 * t.ln())).unwrap();
        assert_eq!(log.selected, RateModel::Logarithmic);
        assert!((log.model(RateModel::Logarithmic).a - 0.125).abs() < 0.125 * 0.01);
        assert_eq!(fit_rate(&synth(|t| 2.0 * t.sqrt())).unwrap().selected, RateModel::Sqrt);
        assert_eq!(fit_rate(&synth(|t| 0.5 * t)).unwrap().selected, RateModel::Linear);
    }

    #[test]
    fn short_curves_are_rejected() {
        assert!(fit_rate(&(1..=50).map(|t| (t, t as f64)).collect::<Vec<_>>()).is_err());
    }

    #[test]
    fn inverse_t_recovers_constant() {
        let pts: Vec<(f64, f64)> = (1..20).map(|k| (k as f64 * 100.0, 3.0 / (k as f64 * 100.0))).collect();
        let (c, r2) = fit_inverse_t(&pts);
        assert!((c - 3.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn loglog_slope_of_power_law() {
        let (slope, _) = loglog_exponent(&synth(|t| 4.0 * t.powf(0.5)), FIT_FROM).unwrap();
        assert!((slope - 0.5).abs() < 1e-12);
    }
}
