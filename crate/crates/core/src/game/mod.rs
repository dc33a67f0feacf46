//! Environments, mixture plays, the round loop and its regret ledger.

mod engine;
mod env;
mod ledger;
mod minimax;
mod mixture;
mod props;
mod sample;
mod space;

pub(crate) use engine::check_environments;
pub use engine::{
    hindsight_oracle, log_checkpoints, regret_curve, run_game, Adversary, GameConfig, GameContext, Player,
};
pub use env::{AnalyticRisk, EnvKind, Environment, PolynomialRisk, QuadraticRisk, Risk};
pub use ledger::{format_g17, read_ledger_csv, CsvRow, LedgerSummary, RegretLedger, RoundRecord, CSV_HEADER};
pub use minimax::{minimize_worst_case, vertex_pieces};
pub use mixture::{mixture_gradient, mixture_risk, CombinedRisk, MixturePlay, Region};
pub use props::{check_prop1, check_prop2, Prop1Check};
pub use sample::{Atom, LinearPredictor, PointLoss, Predictor, QuadraticFeaturePredictor, SampleRisk, SquaredLoss};
pub use space::ParamSpace;
