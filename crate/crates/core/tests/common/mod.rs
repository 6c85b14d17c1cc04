#![allow(dead_code)]

pub mod oracles;

use coevo::builtin;
use coevo::cards::{CardId, Deck};
use coevo::engine::{Action, GameState};
use coevo::WeightVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn decks() -> Vec<Deck> {
    builtin::standard_decks()
}

pub fn id(state: &GameState, name: &str) -> CardId {
    state.catalog().id_of(name).unwrap_or_else(|| panic!("no card {name}"))
}

/// Turn-1 game with both hands and boards emptied and `mana` available
/// to the player to move.
pub fn blank(seed: u64, mana: u8) -> GameState {
    let d = decks();
    let mut s = GameState::new(&d[0], &d[1], seed);
    for i in 0..2 {
        let side = s.side_mut(i);
        side.hand.clear();
        side.battlefield.clear();
        side.mana_crystals = mana;
        side.mana_available = mana;
    }
    s
}

pub fn random_weights(rng: &mut impl Rng) -> WeightVector {
    WeightVector::new(std::array::from_fn(|_| rng.random())).unwrap()
}

/// Plays uniformly random legal actions for up to `steps` moves.
pub fn random_walk(seed: u64, steps: usize) -> GameState {
    let d = decks();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rng.random_range(0..d.len());
    let b = rng.random_range(0..d.len());
    let mut s = GameState::new(&d[a], &d[b], seed);
    for _ in 0..steps {
        let legal = match s.legal_actions() {
            Ok(l) => l,
            Err(_) => break,
        };
        // Bias away from ending the turn so boards fill up.
        let pick = if legal.len() > 1 && rng.random_bool(0.85) {
            legal[rng.random_range(0..legal.len() - 1)]
        } else {
            Action::EndTurn
        };
        let next = s.apply_action(pick).expect("legal action applies");
        if next.outcome().is_terminal() {
            break;
        }
        s = next;
    }
    s
}
