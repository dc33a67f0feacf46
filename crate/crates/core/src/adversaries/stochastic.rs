use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{Adversary, GameContext, MixturePlay};

/// Finite prior over coefficient vectors.
#[derive(Debug, Clone)]
pub struct StochasticPrior {
    support: Vec<MixturePlay>,
    weights: Vec<f64>,
    index: WeightedIndex<f64>,
}

impl StochasticPrior {
    pub fn new(support: Vec<MixturePlay>, weights: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != weights.len() {
            return Err(Error::InvalidInput(format!(
                "prior needs matching support and weights, got {} and {}",
                support.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidInput("prior weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("prior weights sum to {total}, not 1")));
        }
        let len = support[0].len();
        if support.iter().any(|p| p.len() != len) {
            return Err(Error::InvalidInput("prior support mixes environment counts".into()));
        }
        let index = WeightedIndex::new(&weights).map_err(|e| Error::InvalidInput(format!("prior weights: {e}")))?;
        Ok(StochasticPrior { support, weights, index })
    }

    pub fn uniform(support: Vec<MixturePlay>) -> Result<Self> {
        let n = support.len();
        Self::new(support, vec![1.0 / n as f64; n])
    }

    pub fn point_mass(play: MixturePlay) -> Self {
        Self::new(vec![play], vec![1.0]).expect("valid point mass")
    }

    pub fn support(&self) -> &[MixturePlay] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// One i.i.d. draw from the prior.
pub fn stochastic_play<R: rand::Rng + ?Sized>(prior: &StochasticPrior, rng: &mut R) -> MixturePlay {
    prior.support[prior.index.sample(rng)].clone()
}

/// Draws a fresh `λ` from the prior each round, using the game's adversary stream.
#[derive(Debug, Clone)]
pub struct StochasticAdversary {
    prior: StochasticPrior,
}

impl StochasticAdversary {
    pub fn new(prior: StochasticPrior) -> Self {
        StochasticAdversary { prior }
    }
}

impl Adversary for StochasticAdversary {
    fn name(&self) -> &str {
        "stochastic"
    }

    fn choose(
        &mut self,
        _ctx: &GameContext<'_>,
        _beta: &[f64],
        _history: &[MixturePlay],
        rng: &mut ChaCha8Rng,
    ) -> Result<MixturePlay> {
        Ok(stochastic_play(&self.prior, rng))
    }
}

/// A coefficient sequence fixed before the game starts.
#[derive(Debug, Clone)]
pub enum Oblivious {
    Constant(MixturePlay),
    Sequence(Vec<MixturePlay>),
}

impl Oblivious {
    pub fn constant(play: MixturePlay) -> Self {
        Oblivious::Constant(play)
    }

    /// `horizon` draws from `prior`, committed up front from `seed`.
    pub fn sampled(prior: &StochasticPrior, horizon: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Oblivious::Sequence((0..horizon).map(|_| stochastic_play(prior, &mut rng)).collect())
    }

    /// The play for round `t` (1-based).
    pub fn play_at(&self, t: usize) -> Result<MixturePlay> {
        match self {
            Oblivious::Constant(p) => Ok(p.clone()),
            Oblivious::Sequence(seq) => t
                .checked_sub(1)
                .and_then(|i| seq.get(i))
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("oblivious sequence has no round {t}"))),
        }
    }
}

impl Adversary for Oblivious {
    fn name(&self) -> &str {
        "oblivious"
    }

    fn choose(
        &mut self,
        ctx: &GameContext<'_>,
        _beta: &[f64],
        _history: &[MixturePlay],
        _rng: &mut ChaCha8Rng,
    ) -> Result<MixturePlay> {
        self.play_at(ctx.t)
    }
}
