//! Ready-made scenarios used by the acceptance suite and shipped as TOML
//! files under `scenarios/`.

use super::config::*;
use crate::game::{ParamSpace, Region};
use crate::players::StepSchedule;
use crate::tolerance::Tolerances;

fn base(name: &str, horizon: usize, space: ParamSpace, region: Region, environments: EnvironmentsSpec) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        horizon,
        seeds: vec![1],
        output: None,
        space,
        region,
        environments,
        player: PlayerSpec::Ftl {
            initial: None,
            oracle: SearchSpec::default(),
        },
        adversary: AdversarySpec::VertexWorstCase,
        hindsight: SearchSpec::default(),
        tolerances: Tolerances::default(),
        report: ReportSpec::default(),
        base_dir: None,
    }
}

/// `{(β−1)², (β+1)²}` on `[−2, 2]`, FTL against the hybrid adversary.
/// `G = 8` is a deliberately loose gradient bound.
pub fn interpolation_pair(horizon: usize) -> ScenarioConfig {
    let item = |mu: f64| QuadraticSpec {
        q: None,
        scale: Some(1.0),
        mu: vec![mu],
        c: 0.0,
        lipschitz: Some(8.0),
    };
    let mut c = base(
        "interpolation-pair",
        horizon,
        ParamSpace::interval(-2.0, 2.0),
        Region::Convex,
        EnvironmentsSpec::Quadratic {
            items: vec![item(1.0), item(-1.0)],
        },
    );
    c.adversary = AdversarySpec::HybridLogt;
    c
}

/// The trap pair on `[−3, 3]` with a fine hindsight grid.
pub fn affine_trap(horizon: usize, alpha: f64, sample_based: bool) -> ScenarioConfig {
    let environments = if sample_based {
        EnvironmentsSpec::SampledTrap { alpha }
    } else {
        EnvironmentsSpec::AffineTrap { alpha }
    };
    let mut c = base(
        "affine-trap",
        horizon,
        ParamSpace::interval(-3.0, 3.0),
        Region::Affine { alpha },
        environments,
    );
    c.adversary = AdversarySpec::AffineTrap { alpha: None };
    c.hindsight = SearchSpec {
        grid_step: Some(1e-4),
        starts: None,
    };
    c
}

/// The stable-set game on `graph` (a built-in name or a file).
pub fn motzkin(graph: &str, n: usize, alpha: f64, horizon: usize) -> ScenarioConfig {
    let mut c = base(
        "motzkin",
        horizon,
        ParamSpace::Simplex { dim: n },
        Region::Affine { alpha },
        EnvironmentsSpec::Motzkin {
            graph: graph.into(),
            alpha,
        },
    );
    c.adversary = AdversarySpec::Constant { lambda: None };
    c
}

/// A tilted double well: `β⁴ + β²/2` against `8β² ± β`, mixed by an
/// oblivious random sign. FTPL starts at the bottom of a well.
pub fn perturbed_double_well(horizon: usize, seeds: usize) -> ScenarioConfig {
    let poly = |coefficients: Vec<f64>| PolynomialSpec {
        coefficients,
        lipschitz: None,
    };
    let mut c = base(
        "perturbed-double-well",
        horizon,
        ParamSpace::interval(-2.0, 2.0),
        Region::Affine { alpha: 0.5 },
        EnvironmentsSpec::Polynomial {
            items: vec![
                poly(vec![0.0, 0.0, 0.5, 0.0, 1.0]),
                poly(vec![0.0, 1.0, 8.0]),
                poly(vec![0.0, -1.0, 8.0]),
            ],
        },
    );
    c.seeds = (1..=seeds as u64).collect();
    c.player = PlayerSpec::Ftpl {
        eta: None,
        initial: Some(vec![(13.0_f64 / 12.0).sqrt()]),
        oracle: SearchSpec {
            grid_step: Some(1e-2),
            starts: None,
        },
    };
    c.adversary = AdversarySpec::Oblivious {
        support: vec![vec![1.5, -0.5, 0.0], vec![1.5, 0.0, -0.5]],
        weights: vec![0.5, 0.5],
    };
    c.hindsight = SearchSpec {
        grid_step: Some(1e-3),
        starts: None,
    };
    c
}

/// OGD on the interpolation pair, for the logarithmic upper bound.
pub fn ogd_pair(horizon: usize) -> ScenarioConfig {
    let mut c = interpolation_pair(horizon);
    c.name = "ogd-pair".into();
    c.player = PlayerSpec::Ogd {
        initial: None,
        schedule: StepSchedule::default(),
    };
    c
}
