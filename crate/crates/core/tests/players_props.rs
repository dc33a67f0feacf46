use std::sync::Arc;

use dgame::adversaries::{HybridLogT, Oblivious};
use dgame::bench::presets;
use dgame::game::*;
use dgame::linalg::{dist, CompensatedSum};
use dgame::optim::GlobalSearch;
use dgame::players::*;
use dgame::Tolerances;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn quadratic_env(id: usize, l: &[f64], mu: &[f64]) -> Environment {
    let q = vec![
        vec![l[0] * l[0] + 0.5, l[0] * l[1]],
        vec![l[0] * l[1], l[1] * l[1] + l[2] * l[2] + 0.5],
    ];
    Environment::quadratic(id, QuadraticRisk::new(q, mu.to_vec(), 0.0).unwrap()).unwrap()
}

fn envs_strategy() -> impl Strategy<Value = Vec<Environment>> {
    proptest::collection::vec(
        (proptest::collection::vec(-1.0..1.0f64, 3), proptest::collection::vec(-3.0..3.0f64, 2)),
        2..=4,
    )
    .prop_map(|v| v.iter().enumerate().map(|(i, (l, mu))| quadratic_env(i, l, mu)).collect())
}

fn history_strategy(max_e: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(proptest::collection::vec(0.01..1.0f64, max_e), 1..20)
}

fn convex(raw: &[f64], e: usize) -> MixturePlay {
    let s: f64 = raw[..e].iter().sum();
    let mut c: Vec<f64> = raw[..e].iter().map(|x| x / s).collect();
    let drift = c.iter().sum::<f64>() - 1.0;
    c[0] -= drift;
    MixturePlay::convex(c).unwrap()
}

fn state_from(envs: &[Environment], hist: &[Vec<f64>], init: Vec<f64>) -> PlayerState {
    let mut state = PlayerState::new(init.clone(), envs.len());
    for raw in hist {
        state.record(&init, &convex(raw, envs.len()), envs).unwrap();
    }
    state
}

fn sample_env(id: usize, extra: &[(f64, f64, f64)], raw_p: &[f64]) -> (Environment, Vec<(Vec<f64>, f64, f64)>) {
    let mut pts = vec![(vec![1.0, 0.0], extra[0].2, 0.3), (vec![0.0, 1.0], extra[1].2, 0.3)];
    let s: f64 = raw_p.iter().sum();
    for (k, &(a, b, y)) in extra.iter().enumerate() {
        pts.push((vec![a, b], y, 0.4 * raw_p[k] / s));
    }
    let atoms = pts.iter().map(|(z, y, p)| Atom::new(z.clone(), *y, *p)).collect();
    let risk = SampleRisk::new(2, atoms, Arc::new(LinearPredictor), Arc::new(SquaredLoss)).unwrap();
    let mut h = DMatrix::zeros(2, 2);
    for (z, _, p) in &pts {
        let zv = DVector::from_column_slice(z);
        h += 2.0 * *p * &zv * zv.transpose();
    }
    let ev = h.symmetric_eigenvalues();
    let env = Environment::sample_based(id, risk, ev.min(), ev.max()).unwrap();
    (env, pts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ftl_is_stationary(envs in envs_strategy(), hist in history_strategy(4)) {
        let space = ParamSpace::boxed(vec![-10.0, -10.0], vec![10.0, 10.0]).unwrap();
        let tol = Tolerances::default();
        let state = state_from(&envs, &hist, vec![0.0, 0.0]);
        let beta = ftl_play(&state, &envs, &space, GlobalSearch::Auto, &tol).unwrap();
        let mut g = vec![0.0; 2];
        for (env, c) in envs.iter().zip(state.cumulative_coefficients()) {
            env.add_gradient(&beta, *c, &mut g);
        }
        let step: Vec<f64> = beta.iter().zip(&g).map(|(b, gi)| b - gi).collect();
        prop_assert!(dist(&beta, &space.project(&step)) <= 1e-8);
    }

    #[test]
    fn ftl_matches_pooled_least_squares(
        extras in proptest::collection::vec(proptest::collection::vec((-2.0..2.0f64, -2.0..2.0f64, -3.0..3.0f64), 2), 2..=3),
        probs in proptest::collection::vec(0.1..1.0f64, 2),
        hist in history_strategy(3),
    ) {
        let built: Vec<_> = extras.iter().enumerate().map(|(i, ex)| sample_env(i, ex, &probs)).collect();
        let envs: Vec<Environment> = built.iter().map(|(e, _)| e.clone()).collect();
        let space = ParamSpace::boxed(vec![-100.0, -100.0], vec![100.0, 100.0]).unwrap();
        let state = state_from(&envs, &hist, vec![0.0, 0.0]);
        let beta = ftl_play(&state, &envs, &space, GlobalSearch::Auto, &Tolerances::default()).unwrap();

        // Normal equations of the λ-weighted pooled data.
        let mut a = DMatrix::<f64>::zeros(2, 2);
        let mut b = DVector::<f64>::zeros(2);
        for ((_, pts), w) in built.iter().zip(state.cumulative_coefficients()) {
            for (z, y, p) in pts {
                let zv = DVector::from_column_slice(z);
                a += *w * *p * &zv * zv.transpose();
                b += *w * *p * *y * &zv;
            }
        }
        let sol = a.lu().solve(&b).unwrap();
        prop_assert!((beta[0] - sol[0]).abs() <= 1e-8 && (beta[1] - sol[1]).abs() <= 1e-8);
    }

    #[test]
    fn ftpl_approaches_ftl_for_large_rate(envs in envs_strategy(), hist in history_strategy(4), seed in any::<u64>()) {
        let space = ParamSpace::boxed(vec![-4.0, -4.0], vec![4.0, 4.0]).unwrap();
        let tol = Tolerances::default();
        let state = state_from(&envs, &hist, vec![0.0, 0.0]);
        let ftl = ftl_play(&state, &envs, &space, GlobalSearch::Auto, &tol).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ftpl = ftpl_play(&state, &envs, &space, 1e6, &mut rng, GlobalSearch::Auto, &tol).unwrap();
        prop_assert!(dist(&ftl, &ftpl) <= 1e-4);
    }

    #[test]
    fn state_accumulates_history(envs in envs_strategy(), hist in history_strategy(4)) {
        let state = state_from(&envs, &hist, vec![0.5, -0.5]);
        prop_assert_eq!(state.rounds(), hist.len());
        for e in 0..envs.len() {
            let mut s = CompensatedSum::new();
            for lam in state.history() {
                s.add(lam.coefficients()[e]);
            }
            prop_assert!((s.value() - state.cumulative_coefficients()[e]).abs() <= 1e-12);
        }
        prop_assert_eq!(state.beta_current(), &[0.5, -0.5][..]);
    }

    #[test]
    fn ogd_within_harmonic_bound(plays in proptest::collection::vec(0.0..1.0f64, 200)) {
        let scenario = presets::interpolation_pair(200).build().unwrap();
        let rc = scenario.rate_constants().unwrap().0;
        let seq = plays.iter().map(|&p| MixturePlay::convex(vec![p, 1.0 - p]).unwrap()).collect();
        let ledger = run_game(
            &scenario.envs,
            &scenario.space,
            &mut Ogd::new(StepSchedule::default()),
            &mut Oblivious::Sequence(seq),
            &GameConfig::new(200, 0, Region::Convex),
        ).unwrap();
        prop_assert!(ledger.regret() <= rc.upper_harmonic(200).unwrap());
    }
}

#[test]
fn ogd_against_hybrid_within_harmonic_bound() {
    let scenario = presets::interpolation_pair(10_000).build().unwrap();
    let rc = scenario.rate_constants().unwrap().0;
    let ledger = run_game(
        &scenario.envs,
        &scenario.space,
        &mut Ogd::new(StepSchedule::default()),
        &mut HybridLogT::new(rc),
        &GameConfig::new(10_000, 0, Region::Convex),
    )
    .unwrap();
    let bound = rc.upper_harmonic(10_000).unwrap();
    assert!(ledger.regret() > 0.0 && ledger.regret() <= bound, "{} vs {bound}", ledger.regret());
}

#[test]
fn minimax_examples() {
    let tol = Tolerances::default();
    let space = ParamSpace::interval(-2.0, 2.0);
    let q = |m: f64| Environment::quadratic(0, QuadraticRisk::scalar(1.0, m, 0.0).unwrap()).unwrap();
    let pair = [q(1.0), q(-1.0)];
    let beta = minimax_play(&pair, &space, GlobalSearch::Auto, &tol).unwrap();
    assert!(beta[0].abs() < 1e-6);
    let single = minimax_play(&[q(0.7)], &space, GlobalSearch::Auto, &tol).unwrap();
    assert!((single[0] - 0.7).abs() < 1e-6);
    let twins = minimax_play(&[q(0.7), q(0.7)], &space, GlobalSearch::Auto, &tol).unwrap();
    assert!((twins[0] - 0.7).abs() < 1e-6);
}

#[test]
fn ftpl_rejects_nonpositive_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(draw_perturbation(1, 0.0, &mut rng).is_err());
    assert!(draw_perturbation(1, -1.0, &mut rng).is_err());
}
