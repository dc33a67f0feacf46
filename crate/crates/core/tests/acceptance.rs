//! End-to-end acceptance gate. Each criterion prints one PASS/FAIL line.

use std::io::Write;
use std::time::Instant;

use dgame::adversaries::*;
use dgame::bench::*;
use dgame::game::*;
use dgame::linalg::norm;
use dgame::optim::{forceable_gradient_g, global_min_grid, GlobalSearch, RateConstants};
use dgame::players::{BestResponse, Ftl, Ftpl, Ogd, StepSchedule};
use dgame::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn report(id: usize, title: &str, outcome: &Outcome) {
    // Written to the raw handle so the line shows up without --nocapture.
    let line = match outcome {
        Ok(detail) => format!("PASS criterion {id} ({title}): {detail}\n"),
        Err(detail) => format!("FAIL criterion {id} ({title}): {detail}\n"),
    };
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn brute_force_gamma(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << n)
        .filter(|mask| edges.iter().all(|&(u, v)| mask & (1 << u) == 0 || mask & (1 << v) == 0))
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap()
}

fn interpolation_run() -> Result<(RegretLedger, Scenario, f64), dgame::Error> {
    let config = presets::interpolation_pair(10_000);
    let start = Instant::now();
    let report = run_scenario(&config)?;
    let elapsed = start.elapsed().as_secs_f64();
    let ledger = report.runs.into_iter().next().unwrap().ledger;
    Ok((ledger, config.build()?, elapsed))
}

fn logarithmic_lower_bound() -> Outcome {
    let config = presets::interpolation_pair(10_000);
    let start = Instant::now();
    let report = run_scenario(&config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let scenario = config.build().map_err(|e| e.to_string())?;
    let g = forceable_gradient_g(&scenario.envs, &scenario.space, GlobalSearch::Auto).map_err(|e| e.to_string())?;
    let rc = RateConstants::from_environments(&scenario.envs, g.g).map_err(|e| e.to_string())?;
    let regret = report.summary.per_seed[0].regret;
    let lower = rc.lower_const() * (10_000f64).ln();
    let upper = rc.upper_harmonic(10_000).ok_or("no gradient bound")?;
    let fit = report.summary.rate_fit.as_ref().ok_or("no rate fit")?;
    ensure(
        (g.g - 2.0).abs() < 1e-9
            && (rc.lower_const() - 0.125).abs() < 1e-12
            && regret >= lower
            && regret <= upper
            && fit.selected == RateModel::Logarithmic
            && elapsed < 5.0,
        format!(
            "g={:.6} lower_const={} regret={regret:.4} in [{lower:.4}, {upper:.2}], selected {:?} (R²={:.5}), {elapsed:.2}s",
            g.g,
            rc.lower_const(),
            fit.selected,
            fit.model(fit.selected).r_squared
        ),
    )
}

fn per_round_decay() -> Outcome {
    let (ledger, scenario, _) = interpolation_run().map_err(|e| e.to_string())?;
    let checkpoints = dyadic_checkpoints(100, 10_000);
    let curve = regret_curve(
        &ledger,
        &scenario.envs,
        &scenario.space,
        &checkpoints,
        GlobalSearch::Auto,
        &Tolerances::default(),
    )
    .map_err(|e| e.to_string())?;
    let increments = window_increments(&curve);
    let (c, r2) = fit_inverse_t(&increments);
    ensure(r2 >= 0.9, format!("{} dyadic windows, c={c:.4}, R²={r2:.4}", increments.len()))
}

fn linear_regret_in_the_trap() -> Outcome {
    let horizon = 2000;
    let space = ParamSpace::interval(-3.0, 3.0);
    let analytic = affine_trap_environments(0.5, &space).map_err(|e| e.to_string())?;
    let samples = sampled_trap_environments(0.5, &space).map_err(|e| e.to_string())?;
    let cfg = GameConfig::new(horizon, 0, Region::Affine { alpha: 0.5 }).with_hindsight(GlobalSearch::Grid { step: 1e-4 });
    let bound = horizon as f64 / 2.0 - 1e-3;
    let mut details = Vec::new();
    let mut ok = true;
    let play = |name: &str, envs: &[Environment], player: &mut dyn Player| -> Result<RegretLedger, String> {
        run_game(envs, &space, player, &mut AffineTrap::new(0.5).unwrap(), &cfg).map_err(|e| format!("{name}: {e}"))
    };
    for (name, analytic_run, sample_run) in [
        (
            "ftl",
            play("ftl", &analytic, &mut Ftl::new())?,
            play("ftl/samples", &samples, &mut Ftl::new())?,
        ),
        (
            "ogd",
            play("ogd", &analytic, &mut Ogd::new(StepSchedule::default()))?,
            play("ogd/samples", &samples, &mut Ogd::new(StepSchedule::default()))?,
        ),
    ] {
        let dev = analytic_run
            .records()
            .iter()
            .zip(sample_run.records())
            .map(|(a, s)| (a.loss - s.loss).abs())
            .fold(0.0, f64::max);
        ok &= analytic_run.regret() >= bound && sample_run.regret() >= bound && dev <= 1e-10;
        details.push(format!(
            "{name} regret {:.1} (samples {:.1}), per-round loss gap {dev:.1e}",
            analytic_run.regret(),
            sample_run.regret()
        ));
    }
    ensure(ok, format!("bound {bound}; {}", details.join("; ")))
}

fn fixture_graphs() -> Vec<(String, GraphInstance)> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push((format!("path:{n}"), GraphInstance::path(n).unwrap()));
        out.push((format!("complete:{n}"), GraphInstance::complete(n).unwrap()));
        out.push((format!("empty:{n}"), GraphInstance::empty(n).unwrap()));
    }
    for n in 3..=8 {
        out.push((format!("cycle:{n}"), GraphInstance::cycle(n).unwrap()));
    }
    for seed in 1..=4 {
        for n in [5, 6, 7, 8] {
            out.push((format!("random:{n}:0.4:{seed}"), GraphInstance::random(n, 0.4, seed).unwrap()));
        }
    }
    out.push(("petersen".into(), GraphInstance::petersen()));
    out
}

fn stable_set_reduction() -> Outcome {
    let alpha = 0.5;
    let tol = Tolerances::default();
    let mut worst_value: f64 = 0.0;
    let mut failures = Vec::new();
    let graphs = fixture_graphs();
    for (name, graph) in &graphs {
        let gamma = brute_force_gamma(graph.n(), graph.edges());
        if graph.gamma() != Some(gamma) {
            failures.push(format!("{name}: certified gamma {:?} vs {gamma}", graph.gamma()));
        }
        let (mut adv, envs) = motzkin_adversary(graph, alpha).map_err(|e| e.to_string())?;
        let space = ParamSpace::simplex(graph.n()).map_err(|e| e.to_string())?;
        let objective = CombinedRisk::new(&envs, vec![1.0 + alpha, -alpha]);
        let min = global_min_grid(&objective, &space, GlobalSearch::Auto, true, &tol).map_err(|e| e.to_string())?;
        let dev = (min.value - 1.0 / gamma as f64).abs();
        worst_value = worst_value.max(dev);
        if dev > 1e-4 {
            failures.push(format!("{name}: min {} vs 1/{gamma}", min.value));
        }
        let ledger = run_game(&envs, &space, &mut Ftl::new(), &mut adv, &GameConfig::new(500, 0, Region::Affine { alpha }))
            .map_err(|e| format!("{name}: {e}"))?;
        let est = stable_set_estimate(&ledger, graph.n()).map_err(|e| e.to_string())?;
        let g = gamma as f64;
        if !(est.gamma_hat >= g / 2.0 && est.gamma_hat <= g + 1e-9) {
            failures.push(format!("{name}: estimate {} outside [{}, {g}]", est.gamma_hat, g / 2.0));
        }
    }
    ensure(
        failures.is_empty(),
        format!("{} graphs, max |min − 1/γ| = {worst_value:.1e}{}", graphs.len(), failures.iter().map(|f| format!("; {f}")).collect::<String>()),
    )
}

fn expert_identity_and_ftpl_rate() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for case in 0..1000 {
        let experts = rng.random_range(2..=6);
        let alpha = rng.random_range(0.05..3.0);
        let inst = ExpertInstance::random(experts, 1, alpha, BaseLoss::Squared, case).map_err(|e| e.to_string())?;
        let delta = ParamSpace::simplex(experts).unwrap().sample(&mut rng);
        worst = worst.max(verify_expert_identity(&inst, 1, &delta).map_err(|e| e.to_string())?);
    }

    let config = presets::perturbed_double_well(10_000, 20);
    let report = run_scenario(&config).map_err(|e| e.to_string())?;
    let curve = report.mean_curve();
    let (slope, _) = loglog_exponent(&curve, FIT_FROM).map_err(|e| e.to_string())?;
    let fit = fit_rate(&curve).map_err(|e| e.to_string())?;
    let sqrt = fit.model(RateModel::Sqrt).r_squared;
    let linear = fit.model(RateModel::Linear).r_squared;
    ensure(
        worst <= 1e-12 && (0.35..=0.7).contains(&slope) && sqrt > linear,
        format!("cancellation max {worst:.1e} over 1000 cases; FTPL exponent {slope:.3}, R² sqrt {sqrt:.4} vs linear {linear:.4}"),
    )
}

fn one_shot_equivalences() -> Outcome {
    let (lhs, rhs) = check_prop2(&[1.0, 3.0], 0.5).map_err(|e| e.to_string())?;
    let mut ok = (lhs - 4.0).abs() <= 1e-12 && (rhs - 4.0).abs() <= 1e-12;
    let mut details = vec![format!("(1,3)/0.5 → ({lhs}, {rhs})")];
    for config in [
        presets::interpolation_pair(100),
        presets::ogd_pair(100),
        presets::affine_trap(100, 0.5, false),
        presets::affine_trap(100, 0.5, true),
        presets::perturbed_double_well(100, 1),
        presets::motzkin("cycle:5", 5, 0.5, 100),
    ] {
        let rep = verify_identities(&config).map_err(|e| e.to_string())?;
        let p1 = rep.check("hull_vs_vertices").unwrap().max_deviation;
        let p2 = rep.check("affine_worst_case_closed_form").unwrap().max_deviation;
        ok &= p1 <= 1e-6 && p2 <= 1e-12;
        details.push(format!("{}: {p1:.1e}/{p2:.1e}", config.name));
    }
    ensure(ok, details.join(", "))
}

fn property_spot_checks() -> Outcome {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let space = ParamSpace::boxed(vec![-50.0, -50.0], vec![50.0, 50.0]).unwrap();
    let mut residual: f64 = 0.0;
    for _ in 0..100 {
        let envs: Vec<Environment> = (0..3)
            .map(|i| {
                let a: f64 = rng.random_range(0.3..2.0);
                let b: f64 = rng.random_range(-0.5..0.5);
                let q = vec![vec![a, b], vec![b, a + 0.5]];
                let mu = vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
                Environment::quadratic(i, QuadraticRisk::new(q, mu, 0.0).unwrap()).unwrap()
            })
            .collect();
        let simplex = ParamSpace::simplex(3).unwrap();
        let history: Vec<MixturePlay> = (0..rng.random_range(1..20))
            .map(|_| MixturePlay::convex(simplex.sample(&mut rng)).unwrap())
            .collect();
        let mut w = vec![0.0; 3];
        for l in &history {
            for (wi, c) in w.iter_mut().zip(l.coefficients()) {
                *wi += c;
            }
        }
        let leader = hindsight_oracle(&envs, &space, &w, &[0.0, 0.0], GlobalSearch::Auto, &tol).map_err(|e| e.to_string())?;
        let lambda = zero_gradient_play(&history).map_err(|e| e.to_string())?;
        residual = residual.max(norm(&mixture_gradient(&leader.argmin, &lambda, &envs).unwrap()));
    }

    let pair_space = ParamSpace::interval(-2.0, 2.0);
    let q = |m: f64| Environment::quadratic(0, QuadraticRisk::scalar(1.0, m, 0.0).unwrap()).unwrap();
    let pair = vec![q(1.0), q(-1.0)];
    let convex = GameConfig::new(100, 1, Region::Convex);
    let rc = RateConstants::from_environments(&pair, 2.0).unwrap();
    let vertices = StochasticPrior::uniform(vec![MixturePlay::vertex(2, 0), MixturePlay::vertex(2, 1)]).unwrap();
    let trap_space = ParamSpace::interval(-3.0, 3.0);
    let trap_envs = affine_trap_environments(0.5, &trap_space).unwrap();
    let graph = GraphInstance::cycle(5).unwrap();
    let (mut motzkin, motzkin_envs) = motzkin_adversary(&graph, 0.5).unwrap();
    let affine = GameConfig::new(100, 1, Region::Affine { alpha: 0.5 });
    let runs: Vec<(&str, Result<RegretLedger, dgame::Error>)> = vec![
        ("vertex", run_game(&pair, &pair_space, &mut BestResponse::new(), &mut VertexWorstCase, &convex)),
        ("zero-gradient", run_game(&pair, &pair_space, &mut BestResponse::new(), &mut ZeroGradient, &convex)),
        ("hybrid", run_game(&pair, &pair_space, &mut BestResponse::new(), &mut HybridLogT::new(rc), &convex)),
        (
            "stochastic",
            run_game(&pair, &pair_space, &mut BestResponse::new(), &mut StochasticAdversary::new(vertices.clone()), &convex),
        ),
        (
            "oblivious",
            run_game(&pair, &pair_space, &mut BestResponse::new(), &mut Oblivious::sampled(&vertices, 100, 3), &convex),
        ),
        (
            "trap",
            run_game(
                &trap_envs,
                &trap_space,
                &mut BestResponse::new(),
                &mut AffineTrap::new(0.5).unwrap(),
                &affine.with_hindsight(GlobalSearch::Grid { step: 1e-4 }),
            ),
        ),
        (
            "motzkin",
            run_game(&motzkin_envs, &ParamSpace::simplex(5).unwrap(), &mut BestResponse::new(), &mut motzkin, &affine),
        ),
    ];
    let mut worst_br = f64::NEG_INFINITY;
    for (name, run) in runs {
        let r = run.map_err(|e| format!("{name}: {e}"))?.regret();
        worst_br = worst_br.max(r);
    }

    let replay = || {
        run_game(
            &pair,
            &pair_space,
            &mut Ftpl::new(None),
            &mut StochasticAdversary::new(vertices.clone()),
            &GameConfig::new(300, 11, Region::Convex),
        )
        .map(|l| l.to_csv_string())
    };
    let identical = replay().map_err(|e| e.to_string())? == replay().map_err(|e| e.to_string())?;

    ensure(
        residual <= 1e-8 && worst_br <= tol.oracle && identical,
        format!("zero-gradient residual {residual:.1e}, worst best-response regret {worst_br:.1e}, replay identical: {identical}"),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("logarithmic lower bound", logarithmic_lower_bound),
        ("per-round decay", per_round_decay),
        ("linear regret in the affine trap", linear_regret_in_the_trap),
        ("stable-set reduction", stable_set_reduction),
        ("expert identity and FTPL rate", expert_identity_and_ftpl_rate),
        ("one-shot equivalences", one_shot_equivalences),
        ("property spot checks", property_spot_checks),
    ];
    let mut failed = Vec::new();
    for (i, (title, check)) in criteria.iter().enumerate() {
        let outcome = check();
        report(i + 1, title, &outcome);
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
