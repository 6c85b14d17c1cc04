//! Deterministic two-player match simulator.
//!
//! A [`GameState`] is a value: [`GameState::apply_action`] returns the
//! successor and leaves its input untouched. All randomness (deck shuffles,
//! random-target effects) comes from the PRNG carried inside the state, so a
//! match is fully determined by its decks, seed and action sequence.

mod actions;
mod play;
mod rules;
mod state;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use actions::{Action, ActionKind, Target};
pub use play::{play_match, play_match_with, MatchOptions, MatchResult, Policy, ReplayRecord};
pub use state::{GameState, HeroSide, MinionInstance, Weapon};

pub const MAX_HEALTH: i32 = 30;
pub const MAX_MANA: u8 = 10;
pub const MAX_BOARD: usize = 7;
pub const MAX_HAND: usize = 10;
pub const MAX_SECRETS: usize = 5;
pub const HERO_POWER_COST: u8 = 2;
pub const FIRST_PLAYER_HAND: usize = 3;
pub const SECOND_PLAYER_HAND: usize = 4;
/// Half-turns after which an unfinished match is a draw.
pub const DEFAULT_TURN_CAP: u32 = 90;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Ongoing,
    /// Side 0 (the first player) won.
    WinA,
    WinB,
    Draw,
}

impl Outcome {
    pub fn is_terminal(self) -> bool {
        self != Outcome::Ongoing
    }

    /// Index of the winning side, if any.
    pub fn winner(self) -> Option<usize> {
        match self {
            Outcome::WinA => Some(0),
            Outcome::WinB => Some(1),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("game is already over")]
    TerminalState,
    #[error("illegal action {0}")]
    IllegalAction(Action),
    #[error("policy for side {side} returned illegal action {action}")]
    PolicyIllegalAction { side: usize, action: Action },
}

/// Starts a match with the default turn cap.
pub fn new_game(deck_a: &crate::cards::Deck, deck_b: &crate::cards::Deck, seed: u64) -> GameState {
    GameState::new(deck_a, deck_b, seed)
}

/// Outcome of `state`; `Ongoing` while both heroes live and the cap is not exceeded.
pub fn is_terminal(state: &GameState) -> Outcome {
    state.outcome()
}
