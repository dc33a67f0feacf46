use std::fs;
use std::io::{BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fit_rate_from, loglog_exponent, RateFit, Scenario, ScenarioConfig};
use crate::error::{Error, Result};
use crate::game::{log_checkpoints, regret_curve, run_game, CsvRow, MixturePlay, RegretLedger, RoundRecord};

pub const CURVE_HEADER: &str = "t,mean_regret,stddev";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: usize,
    pub mean: f64,
    pub stddev: f64,
}

#[derive(Debug, Clone)]
pub struct SeedRun {
    pub seed: u64,
    pub ledger: RegretLedger,
    /// Regret at each checkpoint, each against its own hindsight optimum.
    pub curve: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub cumulative_loss: f64,
    pub hindsight_value: f64,
    pub hindsight_argmin: Vec<f64>,
    pub regret: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub name: String,
    pub horizon: usize,
    pub per_seed: Vec<SeedSummary>,
    /// Mean and spread of regret at `T/10`, `T/2` and `T`.
    pub checkpoints: Vec<CurvePoint>,
    pub rate_fit: Option<RateFit>,
    pub loglog_exponent: Option<f64>,
    pub config: serde_json::Value,
}

#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub runs: Vec<SeedRun>,
    /// Across-seed regret at every checkpoint.
    pub curve: Vec<CurvePoint>,
    pub summary: ScenarioSummary,
}

impl ScenarioReport {
    pub fn mean_curve(&self) -> Vec<(usize, f64)> {
        self.curve.iter().map(|p| (p.t, p.mean)).collect()
    }
}

/// Runs every seed (in parallel), then aggregates regret curves and fits
/// growth models to the mean curve.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioReport> {
    let scenario = config.build()?;
    let horizon = config.horizon;
    let headline: Vec<usize> = [horizon / 10, horizon / 2, horizon]
        .into_iter()
        .map(|t| t.max(1))
        .collect();
    let mut checkpoints = log_checkpoints(config.report.fit_from, horizon, config.report.checkpoints);
    checkpoints.extend(&headline);
    checkpoints.sort_unstable();
    checkpoints.dedup();

    let runs = config
        .seeds
        .par_iter()
        .map(|&seed| run_seed(&scenario, seed, &checkpoints))
        .collect::<Result<Vec<_>>>()?;

    let curve: Vec<CurvePoint> = checkpoints
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let values: Vec<f64> = runs.iter().map(|r| r.curve[i].1).collect();
            let (mean, stddev) = mean_std(&values);
            CurvePoint { t, mean, stddev }
        })
        .collect();
    let mean: Vec<(usize, f64)> = curve.iter().map(|p| (p.t, p.mean)).collect();
    let rate_fit = fit_rate_from(&mean, config.report.fit_from).ok();
    let loglog = loglog_exponent(&mean, config.report.fit_from).ok().map(|(s, _)| s);

    let summary = ScenarioSummary {
        name: config.name.clone(),
        horizon,
        per_seed: runs
            .iter()
            .map(|r| SeedSummary {
                seed: r.seed,
                cumulative_loss: r.ledger.cumulative_loss(),
                hindsight_value: r.ledger.hindsight_value(),
                hindsight_argmin: r.ledger.hindsight().map(|h| h.argmin.clone()).unwrap_or_default(),
                regret: r.ledger.regret(),
            })
            .collect(),
        checkpoints: curve.iter().filter(|p| headline.contains(&p.t)).copied().collect(),
        rate_fit,
        loglog_exponent: loglog,
        config: config.to_json(),
    };
    Ok(ScenarioReport { runs, curve, summary })
}

fn run_seed(scenario: &Scenario, seed: u64, checkpoints: &[usize]) -> Result<SeedRun> {
    let config = &scenario.config;
    let mut player = scenario.player();
    let mut adversary = scenario.adversary(seed)?;
    let game = config.game_config(seed);
    let ledger = run_game(&scenario.envs, &scenario.space, player.as_mut(), adversary.as_mut(), &game)?;
    let curve = regret_curve(
        &ledger,
        &scenario.envs,
        &scenario.space,
        checkpoints,
        game.hindsight,
        &config.tolerances,
    )?;
    info!("{} seed {seed}: regret {:.6}", config.name, ledger.regret());
    Ok(SeedRun { seed, ledger, curve })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Writes `seed-<s>.csv` per run, `curve.csv` and `summary.json` into `dir`.
pub fn write_report(report: &ScenarioReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for run in &report.runs {
        let path = dir.join(format!("seed-{}.csv", run.seed));
        let mut out = BufWriter::new(fs::File::create(&path)?);
        run.ledger.write_csv(&mut out)?;
        out.flush()?;
        written.push(path);
    }
    let curve_path = dir.join("curve.csv");
    let mut out = BufWriter::new(fs::File::create(&curve_path)?);
    write_curve(&report.curve, &mut out)?;
    out.flush()?;
    written.push(curve_path);

    let summary_path = dir.join("summary.json");
    let json = serde_json::to_string_pretty(&report.summary).map_err(|e| Error::Corrupt(e.to_string()))?;
    fs::write(&summary_path, json + "\n")?;
    written.push(summary_path);
    Ok(written)
}

pub fn write_curve<W: Write>(curve: &[CurvePoint], mut out: W) -> Result<()> {
    writeln!(out, "{CURVE_HEADER}")?;
    for p in curve {
        writeln!(
            out,
            "{},{},{}",
            p.t,
            crate::game::format_g17(p.mean),
            crate::game::format_g17(p.stddev)
        )?;
    }
    Ok(())
}

pub fn read_curve<R: BufRead>(input: R) -> Result<Vec<CurvePoint>> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != CURVE_HEADER {
        return Err(Error::Corrupt(format!("unexpected curve header {header:?}")));
    }
    let mut points = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Corrupt(format!("curve line {}: expected `t,mean,stddev`", n + 2));
        let fields: Vec<&str> = line.split(',').collect();
        let [t, mean, stddev] = fields.as_slice() else {
            return Err(bad());
        };
        points.push(CurvePoint {
            t: t.trim().parse().map_err(|_| bad())?,
            mean: mean.trim().parse().map_err(|_| bad())?,
            stddev: stddev.trim().parse().map_err(|_| bad())?,
        });
    }
    Ok(points)
}

/// Rebuilds a ledger from CSV rows, checking each row's bookkeeping, and
/// recomputes the hindsight optimum under `scenario`.
pub fn ledger_from_rows(rows: &[CsvRow], scenario: &Scenario) -> Result<RegretLedger> {
    let mut ledger = RegretLedger::new();
    for (i, row) in rows.iter().enumerate() {
        if row.t != i + 1 {
            return Err(Error::Corrupt(format!("row {} carries round {}", i + 1, row.t)));
        }
        let lambda = MixturePlay::new(row.lambda.clone(), scenario.config.region)?;
        let loss = crate::game::mixture_risk(&row.beta, &lambda, &scenario.envs)?;
        if (loss - row.loss).abs() > 1e-9 * loss.abs().max(1.0) {
            return Err(Error::Corrupt(format!(
                "round {}: recorded loss {} but the configuration gives {loss}",
                row.t, row.loss
            )));
        }
        ledger.push(RoundRecord {
            t: row.t,
            beta: row.beta.clone(),
            lambda,
            loss: row.loss,
        });
    }
    let totals = ledger.cumulative_coefficients(ledger.horizon());
    let init = rows.last().map(|r| r.beta.clone()).unwrap_or_default();
    let hindsight = crate::game::hindsight_oracle(
        &scenario.envs,
        &scenario.space,
        &totals,
        &init,
        scenario.config.hindsight.search(),
        &scenario.config.tolerances,
    )?;
    ledger.set_hindsight(hindsight);
    Ok(ledger)
}
