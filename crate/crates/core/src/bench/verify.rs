use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ScenarioConfig;
use crate::adversaries::{verify_expert_identity, BaseLoss, ExpertInstance};
use crate::error::Result;
use crate::game::{check_prop1, check_prop2, mixture_risk, MixturePlay, ParamSpace, Region, SampleRisk};

/// Random draws per sampled identity.
const DRAWS: usize = 200;
const SEED: u64 = 0x6964_656e_7469_7479;

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Knobs for negative controls.
#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Evaluates the closed-form side of the affine check with this `α`
    /// instead of the scenario's.
    pub corrupt_alpha: Option<f64>,
}

pub fn verify_identities(config: &ScenarioConfig) -> Result<IdentityReport> {
    verify_identities_with(config, VerifyOptions::default())
}

/// Runs the one-shot equivalences, mixture linearity and (for expert
/// scenarios) the reduction identity on the scenario's environments.
pub fn verify_identities_with(config: &ScenarioConfig, options: VerifyOptions) -> Result<IdentityReport> {
    let scenario = config.build_for_check()?;
    let envs = &scenario.envs;
    let space = &scenario.space;
    let tol = config.tolerances;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = Vec::new();
    let mut record = |name: &str, max_deviation: f64, tolerance: f64| {
        checks.push(IdentityCheck {
            name: name.into(),
            max_deviation,
            tolerance,
            passed: max_deviation <= tolerance,
        })
    };

    let prop1 = check_prop1(envs, space, &tol)?;
    record("hull_vs_vertices", prop1.deviation(), tol.oracle);

    let alpha = match config.region {
        Region::Affine { alpha } => alpha,
        Region::Convex => 0.5,
    };
    let closed_alpha = options.corrupt_alpha.unwrap_or(alpha);
    let mut worst: f64 = 0.0;
    for _ in 0..DRAWS {
        let beta = space.sample(&mut rng);
        let risks: Vec<f64> = envs.iter().map(|e| e.risk(&beta)).collect();
        let (lhs, _) = check_prop2(&risks, alpha)?;
        let (_, rhs) = check_prop2(&risks, closed_alpha)?;
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
    }
    record("affine_worst_case_closed_form", worst, tol.identity);

    let mut worst: f64 = 0.0;
    for _ in 0..DRAWS {
        let beta = space.sample(&mut rng);
        let lambda = random_play(envs.len(), config.region, &mut rng)?;
        let direct = mixture_risk(&beta, &lambda, envs)?;
        let by_parts: f64 = envs
            .iter()
            .zip(lambda.coefficients())
            .map(|(e, l)| l * e.risk(&beta))
            .sum();
        let mut dev = (direct - by_parts).abs() / by_parts.abs().max(1.0);
        let parts: Option<Vec<(&SampleRisk, f64)>> = envs
            .iter()
            .zip(lambda.coefficients())
            .map(|(e, &l)| e.sample_risk().map(|s| (s, l)))
            .collect();
        if let Some(parts) = parts {
            let pooled = crate::game::Risk::value(&SampleRisk::pool(&parts)?, &beta);
            dev = dev.max((pooled - by_parts).abs() / by_parts.abs().max(1.0));
        }
        worst = worst.max(dev);
    }
    record("mixture_linearity", worst, tol.identity);

    let example = ExpertInstance::new(1.0, vec![vec![1.0, 2.0]], vec![1.5], BaseLoss::Squared)?;
    let mut worst = verify_expert_identity(&example, 1, &[0.3, 0.7])?;
    let instance = match &scenario.experts {
        Some(inst) => inst.clone(),
        None => ExpertInstance::random(3, 20, alpha, BaseLoss::Squared, SEED)?,
    };
    let simplex = ParamSpace::simplex(instance.experts())?;
    for t in 1..=instance.rounds() {
        for _ in 0..DRAWS / 20 {
            let delta = simplex.sample(&mut rng);
            worst = worst.max(verify_expert_identity(&instance, t, &delta)?);
        }
    }
    record("expert_reduction", worst, tol.identity);

    Ok(IdentityReport { checks })
}

/// Uniform simplex point, stretched to cover the affine region when needed.
fn random_play(e: usize, region: Region, rng: &mut ChaCha8Rng) -> Result<MixturePlay> {
    let simplex = ParamSpace::simplex(e)?;
    let p = simplex.sample(rng);
    match region {
        Region::Convex => MixturePlay::convex(p),
        Region::Affine { alpha } => {
            let stretch = 1.0 + e as f64 * alpha;
            let mut l: Vec<f64> = p.iter().map(|pi| stretch * pi - alpha).collect();
            // Restore the exact unit sum lost to rounding.
            let drift = l.iter().sum::<f64>() - 1.0;
            let top = (0..e).fold(0, |b, i| if l[i] > l[b] { i } else { b });
            l[top] -= drift;
            MixturePlay::affine(l, alpha)
        }
    }
}
