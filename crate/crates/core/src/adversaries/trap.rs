use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{
    Adversary, Atom, Environment, GameContext, MixturePlay, ParamSpace, PolynomialRisk, QuadraticFeaturePredictor,
    SampleRisk, SquaredLoss,
};

/// Trap against deterministic players on `{β², β⁴ + β²/(2α)}`: extrapolate
/// with `(1+α, −α)` near the origin, otherwise play the first environment.
pub fn affine_trap_play(beta: &[f64], alpha: f64) -> Result<MixturePlay> {
    if beta.len() != 1 {
        return Err(Error::DimensionMismatch {
            context: "affine trap parameters",
            expected: 1,
            found: beta.len(),
        });
    }
    if beta[0].abs() < 1.0 {
        MixturePlay::affine(vec![1.0 + alpha, -alpha], alpha)
    } else {
        Ok(MixturePlay::vertex(2, 0))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")))
    }
}

fn interval_of(space: &ParamSpace) -> Result<(f64, f64)> {
    match space {
        ParamSpace::Box { lo, hi } if lo.len() == 1 => Ok((lo[0], hi[0])),
        _ => Err(Error::InvalidInput("the affine trap lives on a 1-D box".into())),
    }
}

/// The analytic pair `β²` and `β⁴ + β²/(2α)` with curvature and gradient
/// bounds measured on `space`.
pub fn affine_trap_environments(alpha: f64, space: &ParamSpace) -> Result<Vec<Environment>> {
    check_alpha(alpha)?;
    let (lo, hi) = interval_of(space)?;
    [vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 1.0 / (2.0 * alpha), 0.0, 1.0]]
        .into_iter()
        .enumerate()
        .map(|(id, coefficients)| {
            let p = PolynomialRisk::new(coefficients)?;
            let (smin, smax, lip) = p.interval_bounds(lo, hi);
            Ok(Environment::custom(id, p, smin, smax)?.with_lipschitz_bound(lip))
        })
        .collect()
}

/// The same pair realized as finite data: the predictor `β²z₁ + βz₂` under
/// squared loss with zero labels.
pub fn sampled_trap_environments(alpha: f64, space: &ParamSpace) -> Result<Vec<Environment>> {
    check_alpha(alpha)?;
    let predictor = Arc::new(QuadraticFeaturePredictor);
    let loss = Arc::new(SquaredLoss);
    let s = ((2.0 * alpha + 1.0) / (2.0 * alpha)).sqrt();
    let first = SampleRisk::new(1, vec![Atom::new(vec![0.0, 1.0], 0.0, 1.0)], predictor.clone(), loss.clone())?;
    let p_linear = 1.0 / (2.0 * alpha + 1.0);
    let second = SampleRisk::new(
        1,
        vec![
            Atom::new(vec![0.0, s], 0.0, p_linear),
            Atom::new(vec![s, 0.0], 0.0, 1.0 - p_linear),
        ],
        predictor,
        loss,
    )?;
    let analytic = affine_trap_environments(alpha, space)?;
    let bounds = |e: &Environment| (e.sigma_min(), e.sigma_max(), e.lipschitz_bound());
    [first, second]
        .into_iter()
        .zip(&analytic)
        .enumerate()
        .map(|(id, (risk, twin))| {
            let (smin, smax, lip) = bounds(twin);
            let env = Environment::sample_based(id, risk, smin, smax)?;
            Ok(match lip {
                Some(g) => env.with_lipschitz_bound(g),
                None => env,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct AffineTrap {
    alpha: f64,
}

impl AffineTrap {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(AffineTrap { alpha })
    }
}

impl Adversary for AffineTrap {
    fn name(&self) -> &str {
        "affine_trap"
    }

    fn choose(
        &mut self,
        _ctx: &GameContext<'_>,
        beta: &[f64],
        _history: &[MixturePlay],
        _rng: &mut ChaCha8Rng,
    ) -> Result<MixturePlay> {
        affine_trap_play(beta, self.alpha)
    }
}
