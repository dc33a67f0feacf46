use dgame::adversaries::*;
use dgame::game::*;
use dgame::linalg::norm;
use dgame::optim::{global_min_grid, GlobalSearch};
use dgame::players::{BestResponse, Ftl, Minimax, Ogd, StepSchedule};
use dgame::Tolerances;
use proptest::prelude::*;

/// Largest independent set by checking every subset.
fn brute_force_gamma(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << n)
        .filter(|mask| edges.iter().all(|&(u, v)| mask & (1 << u) == 0 || mask & (1 << v) == 0))
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap()
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, k)| **k).map(|(e, _)| *e).collect();
            (n, edges)
        })
    })
}

fn quadratic_env(id: usize, l: &[f64], mu: &[f64]) -> Environment {
    let q = vec![
        vec![l[0] * l[0] + 0.3, l[0] * l[1]],
        vec![l[0] * l[1], l[1] * l[1] + l[2] * l[2] + 0.3],
    ];
    Environment::quadratic(id, QuadraticRisk::new(q, mu.to_vec(), 0.0).unwrap()).unwrap()
}

fn convex(raw: &[f64]) -> MixturePlay {
    let s: f64 = raw.iter().sum();
    let mut c: Vec<f64> = raw.iter().map(|x| x / s).collect();
    let drift = c.iter().sum::<f64>() - 1.0;
    c[0] -= drift;
    MixturePlay::convex(c).unwrap()
}

fn trap_space() -> ParamSpace {
    ParamSpace::interval(-3.0, 3.0)
}

fn trap_config(horizon: usize) -> GameConfig {
    GameConfig::new(horizon, 0, Region::Affine { alpha: 0.5 }).with_hindsight(GlobalSearch::Grid { step: 1e-4 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn zero_gradient_vanishes_at_leader(
        params in proptest::collection::vec((proptest::collection::vec(-1.0..1.0f64, 3), proptest::collection::vec(-2.0..2.0f64, 2)), 2..=4),
        hist in proptest::collection::vec(proptest::collection::vec(0.01..1.0f64, 4), 1..25),
    ) {
        let envs: Vec<Environment> = params.iter().enumerate().map(|(i, (l, m))| quadratic_env(i, l, m)).collect();
        let e = envs.len();
        let history: Vec<MixturePlay> = hist.iter().map(|raw| convex(&raw[..e])).collect();
        let space = ParamSpace::boxed(vec![-50.0, -50.0], vec![50.0, 50.0]).unwrap();
        let mut weights = vec![0.0; e];
        for lam in &history {
            for (w, c) in weights.iter_mut().zip(lam.coefficients()) {
                *w += c;
            }
        }
        let tol = Tolerances::default();
        let leader = hindsight_oracle(&envs, &space, &weights, &[0.0, 0.0], GlobalSearch::Auto, &tol).unwrap();
        let lambda = zero_gradient_play(&history).unwrap();
        let grad = mixture_gradient(&leader.argmin, &lambda, &envs).unwrap();
        prop_assert!(norm(&grad) <= 1e-8, "residual {}", norm(&grad));
    }

    #[test]
    fn trap_plays_stay_in_region(beta in -3.0..3.0f64, alpha in 0.01..5.0f64) {
        let play = affine_trap_play(&[beta], alpha).unwrap();
        let c = play.coefficients();
        let min = c.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert!(MixturePlay::affine(c.to_vec(), alpha).is_ok());
        if beta.abs() < 1.0 {
            prop_assert_eq!(min, -alpha);
        } else {
            prop_assert_eq!(min, 0.0);
        }
    }

    #[test]
    fn sample_trap_matches_analytic(beta in -3.0..3.0f64, alpha in 0.05..2.0f64) {
        let space = trap_space();
        let analytic = affine_trap_environments(alpha, &space).unwrap();
        let samples = sampled_trap_environments(alpha, &space).unwrap();
        prop_assert!((samples[0].risk(&[beta]) - beta * beta).abs() <= 1e-12);
        let quartic = beta.powi(4) + beta * beta / (2.0 * alpha);
        prop_assert!((samples[1].risk(&[beta]) - quartic).abs() <= 1e-12 * quartic.max(1.0));
        for (a, s) in analytic.iter().zip(&samples) {
            prop_assert!((a.risk(&[beta]) - s.risk(&[beta])).abs() <= 1e-12 * a.risk(&[beta]).max(1.0));
            prop_assert!((a.gradient(&[beta])[0] - s.gradient(&[beta])[0]).abs() <= 1e-11 * a.gradient(&[beta])[0].abs().max(1.0));
        }
    }

    #[test]
    fn motzkin_minimum_is_inverse_stability((n, edges) in graph_strategy(8), alpha in 0.1..2.0f64) {
        let graph = GraphInstance::new(n, edges.clone()).unwrap();
        let gamma = brute_force_gamma(n, &edges);
        prop_assert_eq!(graph.gamma(), Some(gamma));
        let envs = motzkin_environments(&graph, alpha).unwrap();
        let objective = CombinedRisk::new(&envs, vec![1.0 + alpha, -alpha]);
        let space = ParamSpace::simplex(n).unwrap();
        let report = global_min_grid(&objective, &space, GlobalSearch::Auto, true, &Tolerances::default()).unwrap();
        prop_assert!((report.value - 1.0 / gamma as f64).abs() <= 1e-4, "value {} gamma {}", report.value, gamma);
    }

    #[test]
    fn motzkin_pair_cancels(
        (n, edges) in graph_strategy(8),
        raw in proptest::collection::vec(0.0..1.0f64, 8),
        alpha in 0.1..2.0f64,
    ) {
        let graph = GraphInstance::new(n, edges).unwrap();
        let (adv, envs) = motzkin_adversary(&graph, alpha).unwrap();
        let beta: Vec<f64> = raw[..n].iter().map(|x| x + 1e-3).collect();
        let lambda = adv.play_at(1).unwrap();
        let combined = mixture_risk(&beta, &lambda, &envs).unwrap();
        let direct = graph.motzkin_form(&beta);
        prop_assert!((combined - direct).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn branch_and_bound_matches_enumeration((n, edges) in graph_strategy(12)) {
        let graph = GraphInstance::new(n, edges.clone()).unwrap();
        let gamma = brute_force_gamma(n, &edges);
        prop_assert_eq!(graph.gamma(), Some(gamma));
        let set = graph.max_stable_set();
        prop_assert_eq!(set.len(), gamma);
        for &(u, v) in &edges {
            prop_assert!(!(set.contains(&u) && set.contains(&v)));
        }
    }

    #[test]
    fn graph_text_round_trips((n, edges) in graph_strategy(12)) {
        let graph = GraphInstance::new(n, edges).unwrap();
        let again = GraphInstance::parse(&graph.to_text()).unwrap();
        prop_assert_eq!(graph.edges(), again.edges());
        prop_assert_eq!(graph.n(), again.n());
    }

    #[test]
    fn expert_losses_cancel(
        experts in 2usize..6,
        alpha in 0.05..3.0f64,
        seed in any::<u64>(),
        raw in proptest::collection::vec(0.0..1.0f64, 6),
        which in 0usize..3,
    ) {
        let loss = [BaseLoss::Squared, BaseLoss::Absolute, BaseLoss::Zero][which];
        let inst = ExpertInstance::random(experts, 3, alpha, loss, seed).unwrap();
        let s: f64 = raw[..experts].iter().sum::<f64>() + 1e-9;
        let delta: Vec<f64> = raw[..experts].iter().map(|x| (x + 1e-9 / experts as f64) / s).collect();
        for t in 1..=3 {
            prop_assert!(verify_expert_identity(&inst, t, &delta).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn best_response_has_no_regret(which in 0usize..7, seed in 0u64..1000) {
        let tol = Tolerances::default();
        let pair_space = ParamSpace::interval(-2.0, 2.0);
        let q = |m: f64| Environment::quadratic(0, QuadraticRisk::scalar(1.0, m, 0.0).unwrap()).unwrap();
        let pair = vec![q(1.0), q(-1.0)];
        let horizon = 30;
        let convex_cfg = GameConfig::new(horizon, seed, Region::Convex);
        let mut player = BestResponse::new();
        let ledger = match which {
            0 => run_game(&pair, &pair_space, &mut player, &mut VertexWorstCase, &convex_cfg),
            1 => run_game(&pair, &pair_space, &mut player, &mut ZeroGradient, &convex_cfg),
            2 => {
                let rc = dgame::optim::RateConstants::from_environments(&pair, 2.0).unwrap();
                run_game(&pair, &pair_space, &mut player, &mut HybridLogT::new(rc), &convex_cfg)
            }
            3 => {
                let envs = affine_trap_environments(0.5, &trap_space()).unwrap();
                run_game(&envs, &trap_space(), &mut player, &mut AffineTrap::new(0.5).unwrap(), &trap_config(horizon))
            }
            4 => {
                let graph = GraphInstance::random(5, 0.4, seed).unwrap();
                let (mut adv, envs) = motzkin_adversary(&graph, 0.5).unwrap();
                let space = ParamSpace::simplex(5).unwrap();
                run_game(&envs, &space, &mut player, &mut adv, &GameConfig::new(horizon, seed, Region::Affine { alpha: 0.5 }))
            }
            5 => {
                let prior = StochasticPrior::uniform(vec![MixturePlay::vertex(2, 0), MixturePlay::vertex(2, 1)]).unwrap();
                run_game(&pair, &pair_space, &mut player, &mut StochasticAdversary::new(prior), &convex_cfg)
            }
            _ => {
                let support = vec![
                    MixturePlay::affine(vec![1.5, -0.5], 0.5).unwrap(),
                    MixturePlay::affine(vec![-0.5, 1.5], 0.5).unwrap(),
                ];
                let prior = StochasticPrior::uniform(support).unwrap();
                let mut adv = Oblivious::sampled(&prior, horizon, seed);
                run_game(&pair, &pair_space, &mut player, &mut adv,
                    &GameConfig::new(horizon, seed, Region::Affine { alpha: 0.5 }).with_hindsight(GlobalSearch::Grid { step: 1e-4 }))
            }
        }
        .unwrap();
        prop_assert!(ledger.regret() <= tol.oracle, "adversary {} regret {}", which, ledger.regret());
    }
}

#[test]
fn deterministic_players_fall_into_the_trap() {
    let space = trap_space();
    let envs = affine_trap_environments(0.5, &space).unwrap();
    let tol = Tolerances::default();
    for horizon in [500, 2000] {
        let bound = horizon as f64 / 2.0 - tol.oracle;
        let players: Vec<(&str, Box<dyn Player>)> = vec![
            ("ftl", Box::new(Ftl::new())),
            ("ogd", Box::new(Ogd::new(StepSchedule::default()))),
            ("minimax", Box::new(Minimax::new())),
        ];
        for (name, mut player) in players {
            let ledger =
                run_game(&envs, &space, player.as_mut(), &mut AffineTrap::new(0.5).unwrap(), &trap_config(horizon))
                    .unwrap();
            assert!(ledger.regret() >= bound, "{name} at T={horizon}: {}", ledger.regret());
        }
    }
}

#[test]
fn fixture_graphs_have_known_stability() {
    let cases = [
        (GraphInstance::path(5).unwrap(), 3),
        (GraphInstance::cycle(6).unwrap(), 3),
        (GraphInstance::complete(5).unwrap(), 1),
        (GraphInstance::empty(3).unwrap(), 3),
        (GraphInstance::petersen(), 4),
    ];
    for (graph, gamma) in cases {
        assert_eq!(graph.gamma(), Some(gamma));
        assert_eq!(brute_force_gamma(graph.n(), graph.edges()), gamma);
    }
}
