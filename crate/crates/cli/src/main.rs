use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dgame::adversaries::{motzkin_adversary, stable_set_estimate, GraphInstance};
use dgame::bench::{
    fit_rate_from, ledger_from_rows, loglog_exponent, read_curve, run_scenario, verify_identities, write_report,
    RateFit, ScenarioConfig, CURVE_HEADER, FIT_FROM,
};
use dgame::game::{log_checkpoints, read_ledger_csv, regret_curve, run_game, GameConfig, ParamSpace, Player, Region};
use dgame::optim::{forceable_gradient_g, GlobalSearch, RateConstants};
use dgame::players::{BestResponse, Ftl, Ftpl, Minimax, Ogd, StepSchedule};
use dgame::Error;

/// Output root for `run`; defaults to `./runs`.
const OUTPUT_ROOT_VAR: &str = "DGAME_OUTPUT_ROOT";

#[derive(Parser)]
#[command(name = "dgame", version, about = "Regret simulator for environment-reweighting games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write ledgers, curve and summary.
    Run { config: PathBuf },
    /// Fit growth models to a curve file, or to a ledger CSV given its scenario.
    Rates {
        file: PathBuf,
        /// Scenario that produced the ledger (needed for ledger CSVs).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Estimate a graph's stable-set number by playing the Motzkin game.
    Stableset {
        /// Graph file, or one of petersen, path:N, cycle:N, complete:N, empty:N.
        graph: String,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long = "T", default_value_t = 500)]
        horizon: usize,
        #[arg(long, value_enum, default_value_t = PlayerKind::Ftl)]
        player: PlayerKind,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Verify the one-shot and reduction identities on a scenario.
    Check { config: PathBuf },
    /// Print the forceable gradient and the rate constants of a scenario.
    Gconst { config: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum PlayerKind {
    Ftl,
    Ftpl,
    Ogd,
    Minimax,
    BestResponse,
}

enum Failure {
    Error(Error),
    /// The command ran but a check it performs did not pass.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config } => run(&config),
        Command::Rates { file, config } => rates(&file, config.as_deref()),
        Command::Stableset {
            graph,
            alpha,
            horizon,
            player,
            seed,
        } => stableset(&graph, alpha, horizon, player, seed),
        Command::Check { config } => check(&config),
        Command::Gconst { config } => gconst(&config),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Solver(_) => 3,
        Error::Corrupt(_) => 2,
        e if e.is_validation() => 2,
        _ => 1,
    }
}

fn run(path: &Path) -> Result<(), Failure> {
    let config = ScenarioConfig::from_file(path)?;
    let report = run_scenario(&config)?;
    let root = std::env::var_os(OUTPUT_ROOT_VAR).map_or_else(|| PathBuf::from("runs"), PathBuf::from);
    let dir = config.output_dir(&root);
    write_report(&report, &dir)?;

    let s = &report.summary;
    println!("scenario {} (T = {}, {} seed(s))", s.name, s.horizon, s.per_seed.len());
    for seed in &s.per_seed {
        println!(
            "  seed {:>6}  loss {:>14.6}  hindsight {:>14.6}  regret {:>12.6}",
            seed.seed, seed.cumulative_loss, seed.hindsight_value, seed.regret
        );
    }
    for p in &s.checkpoints {
        println!("  t = {:>8}  mean regret {:>12.6}  stddev {:>10.6}", p.t, p.mean, p.stddev);
    }
    if let Some(fit) = &s.rate_fit {
        print_fit(fit);
    }
    if let Some(k) = s.loglog_exponent {
        println!("  log-log exponent {k:.4}");
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn print_fit(fit: &RateFit) {
    println!("  rate fit over t in [{}, {}]:", fit.from, fit.to);
    for m in &fit.fits {
        println!(
            "    {:<12} a = {:>12.6}  b = {:>12.6}  R^2 = {:.6}{}",
            format!("{:?}", m.model).to_lowercase(),
            m.a,
            m.b,
            m.r_squared,
            if m.selected { "  <- selected" } else { "" }
        );
    }
}

fn rates(file: &Path, config: Option<&Path>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(file).map_err(Error::from)?;
    let header = text.lines().next().unwrap_or_default();
    let full = text.as_bytes();

    let curve: Vec<(usize, f64)> = if header.trim() == CURVE_HEADER {
        read_curve(full)?.into_iter().map(|p| (p.t, p.mean)).collect()
    } else {
        let config = config.ok_or_else(|| {
            Error::InvalidInput("ledger CSVs need --config <scenario> to recompute hindsight".into())
        })?;
        let config = ScenarioConfig::from_file(config)?;
        let scenario = config.build()?;
        let rows = read_ledger_csv(full)?;
        let ledger = ledger_from_rows(&rows, &scenario)?;
        let checkpoints = log_checkpoints(FIT_FROM, ledger.horizon(), config.report.checkpoints);
        regret_curve(
            &ledger,
            &scenario.envs,
            &scenario.space,
            &checkpoints,
            config.hindsight.search(),
            &config.tolerances,
        )?
    };
    let fit = fit_rate_from(&curve, FIT_FROM)?;
    println!("{} points, selected model: {:?}", curve.len(), fit.selected);
    print_fit(&fit);
    if let Ok((k, r2)) = loglog_exponent(&curve, FIT_FROM) {
        println!("  log-log exponent {k:.4} (R^2 {r2:.4})");
    }
    Ok(())
}

fn builtin_graph(source: &str) -> Result<GraphInstance, Error> {
    let parts: Vec<&str> = source.split(':').collect();
    let count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("`{s}` is not a vertex count")))
    };
    match parts.as_slice() {
        ["petersen"] => Ok(GraphInstance::petersen()),
        ["path", n] => GraphInstance::path(count(n)?),
        ["cycle", n] => GraphInstance::cycle(count(n)?),
        ["complete", n] => GraphInstance::complete(count(n)?),
        ["empty", n] => GraphInstance::empty(count(n)?),
        _ => GraphInstance::from_file(Path::new(source)),
    }
}

fn stableset(source: &str, alpha: f64, horizon: usize, kind: PlayerKind, seed: u64) -> Result<(), Failure> {
    let graph = builtin_graph(source)?;
    let (mut adversary, envs) = motzkin_adversary(&graph, alpha)?;
    let space = ParamSpace::simplex(graph.n())?;
    let mut player: Box<dyn Player> = match kind {
        PlayerKind::Ftl => Box::new(Ftl::new()),
        PlayerKind::Ftpl => Box::new(Ftpl::new(None)),
        PlayerKind::Ogd => Box::new(Ogd::new(StepSchedule::default())),
        PlayerKind::Minimax => Box::new(Minimax::new()),
        PlayerKind::BestResponse => Box::new(BestResponse::new()),
    };
    let game = GameConfig::new(horizon, seed, Region::Affine { alpha });
    let ledger = run_game(&envs, &space, player.as_mut(), &mut adversary, &game)?;
    let est = stable_set_estimate(&ledger, graph.n())?;
    println!("graph: {} vertices, {} edges", graph.n(), graph.edges().len());
    println!("gamma_hat = {:.6}", est.gamma_hat);
    println!("interval  = [{:.6}, {:.6}]", est.interval.0, est.interval.1);
    println!(
        "regret    = {:.6} ({} the T/n threshold {:.6})",
        est.regret,
        if est.certified { "within" } else { "above" },
        horizon as f64 / graph.n() as f64
    );
    match graph.gamma() {
        Some(g) => println!(
            "gamma     = {g} by enumeration ({})",
            if est.contains(g as f64) { "inside the interval" } else { "outside the interval" }
        ),
        None => println!("gamma     = not enumerated (more than 16 vertices)"),
    }
    Ok(())
}

fn check(path: &Path) -> Result<(), Failure> {
    let config = ScenarioConfig::from_file(path)?;
    let report = verify_identities(&config)?;
    for c in &report.checks {
        println!(
            "{:<32} max deviation {:>10.3e}  tolerance {:>8.1e}  {}",
            c.name,
            c.max_deviation,
            c.tolerance,
            if c.passed { "pass" } else { "FAIL" }
        );
    }
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(Failure::Check(failed.join(", ")))
    }
}

fn gconst(path: &Path) -> Result<(), Failure> {
    let config = ScenarioConfig::from_file(path)?;
    let scenario = config.build_for_check()?;
    let g = forceable_gradient_g(&scenario.envs, &scenario.space, GlobalSearch::Auto)?;
    let rc = RateConstants::from_environments(&scenario.envs, g.g)?;
    println!("g           = {:.6}{}", g.g, if g.approximate { " (approximate)" } else { "" });
    println!("attained at = {:?}", g.argmin);
    println!("sigma_min   = {:.6}", rc.sigma_min);
    println!("sigma_max   = {:.6}", rc.sigma_max);
    println!("lower_const = {:.6}", rc.lower_const());
    match (rc.lipschitz, rc.upper_harmonic(config.horizon)) {
        (Some(lip), Some(upper)) => {
            println!("G           = {lip:.6}");
            println!("upper_harmonic(T = {}) = {upper:.6}", config.horizon);
        }
        _ => println!("G           = unknown (no Lipschitz bound configured)"),
    }
    Ok(())
}
