//! Scenario files, batch execution, regret-rate fitting and identity checks.

mod config;
pub mod presets;
mod rates;
mod run;
mod verify;

pub use config::{
    AdversarySpec, EnvironmentsSpec, PlayerSpec, PolynomialSpec, QuadraticSpec, ReportSpec, Scenario, ScenarioConfig,
    SearchSpec,
};
pub use rates::{
    dyadic_checkpoints, fit_inverse_t, fit_rate, fit_rate_from, least_squares, loglog_exponent, window_increments,
    ModelFit, RateFit, RateModel, FIT_FROM,
};
pub use run::{
    ledger_from_rows, read_curve, run_scenario, write_curve, write_report, CurvePoint, ScenarioReport,
    ScenarioSummary, SeedRun, SeedSummary, CURVE_HEADER,
};
pub use verify::{verify_identities, verify_identities_with, IdentityCheck, IdentityReport, VerifyOptions};
