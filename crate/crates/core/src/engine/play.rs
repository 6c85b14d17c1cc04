use serde::{Deserialize, Serialize};

use crate::cards::Deck;

use super::actions::Action;
use super::state::GameState;
use super::{EngineError, Outcome, DEFAULT_TURN_CAP};

/// Anything that picks a move for the player to move.
pub trait Policy {
    fn select(&mut self, state: &GameState) -> Action;
}

impl<F> Policy for F
where
    F: FnMut(&GameState) -> Action,
{
    fn select(&mut self, state: &GameState) -> Action {
        self(state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub outcome: Outcome,
    /// Half-turn counter when the match ended.
    pub turns: u32,
    pub final_health: [i32; 2],
}

/// One line of the optional replay log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayRecord {
    pub turn: u32,
    pub side: usize,
    pub action: Action,
    /// Hash of the state after the action resolved.
    pub state_hash: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct MatchOptions {
    pub turn_cap: u32,
    pub record_replay: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions { turn_cap: DEFAULT_TURN_CAP, record_replay: false }
    }
}

/// Plays `policy_a` (first player, `deck_a`) against `policy_b` until the
/// match ends.
pub fn play_match(
    policy_a: &mut dyn Policy,
    policy_b: &mut dyn Policy,
    deck_a: &Deck,
    deck_b: &Deck,
    seed: u64,
) -> Result<MatchResult, EngineError> {
    play_match_with(policy_a, policy_b, deck_a, deck_b, seed, MatchOptions::default()).map(|(result, _)| result)
}

/// Like [`play_match`], optionally returning the replay log.
pub fn play_match_with(
    policy_a: &mut dyn Policy,
    policy_b: &mut dyn Policy,
    deck_a: &Deck,
    deck_b: &Deck,
    seed: u64,
    options: MatchOptions,
) -> Result<(MatchResult, Vec<ReplayRecord>), EngineError> {
    let mut state = GameState::with_turn_cap(deck_a, deck_b, seed, options.turn_cap);
    let mut log = Vec::new();
    while !state.outcome().is_terminal() {
        let side = state.active_index();
        let action = if side == 0 { policy_a.select(&state) } else { policy_b.select(&state) };
        let legal = state.legal_actions()?;
        if !legal.contains(&action) {
            return Err(EngineError::PolicyIllegalAction { side, action });
        }
        let turn = state.turn_number();
        state.resolve(action);
        if options.record_replay {
            log.push(ReplayRecord { turn, side, action, state_hash: state.state_hash() });
        }
    }
    Ok((
        MatchResult {
            outcome: state.outcome(),
            turns: state.turn_number(),
            final_health: [state.side(0).health, state.side(1).health],
        },
        log,
    ))
}
