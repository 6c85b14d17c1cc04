//! Card-game engine, weighted greedy agent and competitive coevolution.
//!
//! - [`cards`]: card catalog and deck files.
//! - [`engine`]: deterministic match simulator.
//! - [`agent`]: greedy player scoring every legal action with 21 weights.
//! - [`coevolution`]: (μ+λ) evolution strategy whose fitness is victories
//!   against the rest of the population.
//! - [`analysis`]: win-rate matrices, weight summaries, Ward clustering,
//!   silhouette selection and rank-sum tests.

pub mod agent;
pub mod analysis;
pub mod builtin;
pub mod cards;
pub mod coevolution;
pub mod engine;
pub mod seed;

pub use agent::{greedy_policy, score_action, select_action, value_of_minion, GreedyAgent, WeightVector};
pub use cards::{load_catalog, load_deck, CardCatalog, CardSpec, Deck, HeroClass};
pub use coevolution::{evolve, EvolutionConfig, FitnessLedger, GenerationStats, Genome, SigmaRule};
pub use engine::{new_game, play_match, Action, GameState, MatchResult, Outcome};
