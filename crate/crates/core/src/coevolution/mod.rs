//! Competitive coevolution of agent weights with a (μ+λ) evolution strategy.
//!
//! Fitness is relative: every individual plays every other member of the
//! current parent+offspring pool on every ordered deck pair, and its
//! fitness is its number of victories. Parents are re-evaluated each
//! generation against the new offspring.

mod evolve;
mod genome;
mod ledger;
mod tournament;

use thiserror::Error;

use crate::cards::Deck;
use crate::engine::EngineError;

pub use evolve::{
    evaluate, evolve, evolve_with, step_generation, GenerationRecord, GenerationStats, ObserverError, RunArtifact,
    ScoredGenome,
};
pub use genome::{
    init_population, mutate, tau_global, tau_local, Genome, GenomeId, SigmaRule, GENE_COUNT, SIGMA_FLOOR,
};
pub use ledger::FitnessLedger;
pub use tournament::{match_seed, round_robin, run_round_robin, schedule_len, Cell, MatchRecord};

pub const DEFAULT_INITIAL_SIGMA: f64 = 0.15;

#[derive(Debug, Error)]
pub enum EvolutionError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("genome {genome}: {source}")]
    Policy { genome: GenomeId, source: EngineError },
    #[error("generation observer failed: {0}")]
    Observer(#[source] ObserverError),
}

/// Run parameters. Defaults reproduce the reference setup: μ = λ = 10,
/// 100 generations, 20 games per deck pairing, 10 independent runs.
#[derive(Debug, Clone)]
pub struct EvolutionConfig {
    pub mu: usize,
    pub lambda: usize,
    pub generations: u32,
    pub games_per_pairing: u32,
    pub decks: Vec<Deck>,
    pub runs: u32,
    pub master_seed: u64,
    pub sigma_rule: SigmaRule,
    pub initial_sigma: f64,
    pub turn_cap: u32,
}

impl EvolutionConfig {
    pub fn new(decks: Vec<Deck>) -> Self {
        EvolutionConfig {
            mu: 10,
            lambda: 10,
            generations: 100,
            games_per_pairing: 20,
            decks,
            runs: 10,
            master_seed: 0,
            sigma_rule: SigmaRule::Additive,
            initial_sigma: DEFAULT_INITIAL_SIGMA,
            turn_cap: crate::engine::DEFAULT_TURN_CAP,
        }
    }

    pub fn validate(&self) -> Result<(), EvolutionError> {
        let fail = |m: &str| Err(EvolutionError::Config(m.to_string()));
        if self.mu == 0 || self.lambda == 0 {
            return fail("mu and lambda must be at least 1");
        }
        if self.mu + self.lambda < 2 {
            return fail("the pool needs at least two individuals");
        }
        if self.games_per_pairing == 0 {
            return fail("games per pairing must be at least 1");
        }
        if self.decks.is_empty() {
            return fail("at least one deck is required");
        }
        if !(self.initial_sigma.is_finite() && self.initial_sigma >= SIGMA_FLOOR) {
            return fail("initial sigma must be finite and at least the sigma floor");
        }
        Ok(())
    }

    /// Largest attainable fitness in a pool of `pool` individuals.
    pub fn max_fitness(&self, pool: usize) -> u64 {
        max_fitness(pool, self.games_per_pairing, self.decks.len())
    }
}

/// `(pool − 1) · games · decks²`: every game against every other member won.
pub fn max_fitness(pool: usize, games: u32, decks: usize) -> u64 {
    (pool.saturating_sub(1) as u64) * u64::from(games) * (decks as u64).pow(2)
}
