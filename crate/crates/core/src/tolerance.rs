use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every solver and check in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Projected-gradient residual at which descent stops.
    pub gradient: f64,
    /// Agreement required between independent optimization routes.
    pub oracle: f64,
    /// Agreement required for algebraic identities.
    pub identity: f64,
    pub max_iterations: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            gradient: 1e-10,
            oracle: 1e-6,
            identity: 1e-12,
            max_iterations: 20_000,
        }
    }
}
