use std::io::{BufRead, Write};

use serde::Serialize;

use super::MixturePlay;
use crate::error::{Error, Result};
use crate::linalg::CompensatedSum;
use crate::optim::SolverReport;

pub const CSV_HEADER: &str = "t,beta,lambda,loss,cum_loss";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord {
    /// Round index, starting at 1.
    pub t: usize,
    pub beta: Vec<f64>,
    pub lambda: MixturePlay,
    /// `f_t(β̂_t)`
    pub loss: f64,
}

/// Per-round history of one game plus its regret against the best fixed
/// parameter in hindsight.
#[derive(Debug, Clone, Default)]
pub struct RegretLedger {
    records: Vec<RoundRecord>,
    running: Vec<f64>,
    sum: CompensatedSum,
    hindsight: Option<SolverReport>,
}

impl RegretLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: RoundRecord) {
        self.sum.add(record.loss);
        self.running.push(self.sum.value());
        self.records.push(record);
    }

    pub fn set_hindsight(&mut self, report: SolverReport) {
        self.hindsight = Some(report);
    }

    pub fn records(&self) -> &[RoundRecord] {
        &self.records
    }

    pub fn horizon(&self) -> usize {
        self.records.len()
    }

    pub fn cumulative_loss(&self) -> f64 {
        self.sum.value()
    }

    /// Compensated cumulative loss after each round.
    pub fn cumulative_losses(&self) -> &[f64] {
        &self.running
    }

    pub fn hindsight(&self) -> Option<&SolverReport> {
        self.hindsight.as_ref()
    }

    /// `min_β Σ f_t(β)`; NaN until the oracle has run.
    pub fn hindsight_value(&self) -> f64 {
        self.hindsight.as_ref().map_or(f64::NAN, |h| h.value)
    }

    pub fn regret(&self) -> f64 {
        self.cumulative_loss() - self.hindsight_value()
    }

    /// Component-wise `Σ_{s<=t} λ_s`.
    pub fn cumulative_coefficients(&self, t: usize) -> Vec<f64> {
        let n = self.records.first().map_or(0, |r| r.lambda.len());
        let mut acc = vec![0.0; n];
        for r in &self.records[..t] {
            for (a, c) in acc.iter_mut().zip(r.lambda.coefficients()) {
                *a += c;
            }
        }
        acc
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for (r, cum) in self.records.iter().zip(&self.running) {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.t,
                join(&r.beta),
                join(r.lambda.coefficients()),
                format_g17(r.loss),
                format_g17(*cum)
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    pub fn summary(&self, config: serde_json::Value) -> LedgerSummary {
        LedgerSummary {
            horizon: self.horizon(),
            cumulative_loss: self.cumulative_loss(),
            hindsight_value: self.hindsight_value(),
            hindsight_argmin: self.hindsight.as_ref().map(|h| h.argmin.clone()).unwrap_or_default(),
            regret: self.regret(),
            config,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct LedgerSummary {
    pub horizon: usize,
    pub cumulative_loss: f64,
    pub hindsight_value: f64,
    pub hindsight_argmin: Vec<f64>,
    pub regret: f64,
    pub config: serde_json::Value,
}

/// One parsed row of a ledger CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub t: usize,
    pub beta: Vec<f64>,
    pub lambda: Vec<f64>,
    pub loss: f64,
    pub cum_loss: f64,
}

pub fn read_ledger_csv<R: BufRead>(input: R) -> Result<Vec<CsvRow>> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != CSV_HEADER {
        return Err(Error::Corrupt(format!("unexpected ledger header {header:?}")));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Corrupt(format!("line {}: expected 5 fields", n + 2)));
        }
        let bad = |what: &str| Error::Corrupt(format!("line {}: bad {what}", n + 2));
        rows.push(CsvRow {
            t: fields[0].parse().map_err(|_| bad("t"))?,
            beta: split_vector(fields[1]).map_err(|_| bad("beta"))?,
            lambda: split_vector(fields[2]).map_err(|_| bad("lambda"))?,
            loss: fields[3].parse().map_err(|_| bad("loss"))?,
            cum_loss: fields[4].parse().map_err(|_| bad("cum_loss"))?,
        });
    }
    Ok(rows)
}

fn split_vector(s: &str) -> std::result::Result<Vec<f64>, std::num::ParseFloatError> {
    s.split(';').map(str::parse).collect()
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format_g17(*x)).collect::<Vec<_>>().join(";")
}

/// Shortest `%.17g`-style rendering: 17 significant digits, trailing zeros
/// trimmed, scientific only for very small or very large magnitudes.
/// Parsing the output recovers the exact `f64`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
