use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agent::{greedy_policy, WeightVector};
use crate::cards::Deck;
use crate::engine::{play_match_with, EngineError, MatchOptions, Outcome};
use crate::seed;

use super::genome::GenomeId;
use super::EvolutionError;

/// One scheduled game: pool members `i < j`, their decks and the game
/// index within the pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
    pub di: usize,
    pub dj: usize,
    pub k: u32,
}

impl Cell {
    /// Pool position of the player who moves first. Seats alternate with
    /// the game index so neither member of a pair always starts.
    pub fn first(&self) -> usize {
        if self.k.is_multiple_of(2) {
            self.i
        } else {
            self.j
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub cell: Cell,
    pub seed: u64,
    /// Pool position of the winner, `None` on a draw.
    pub winner: Option<usize>,
    pub turns: u32,
}

/// Number of games in a round robin over `n` agents.
pub fn schedule_len(n: usize, decks: usize, games: u32) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2 * (decks as u64).pow(2) * u64::from(games)
}

/// Every game of a round robin in canonical order: pairs `i < j`, then
/// deck of `i`, deck of `j`, game index.
pub fn round_robin(n: usize, decks: usize, games: u32) -> impl Iterator<Item = Cell> {
    (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| {
            (0..decks)
                .flat_map(move |di| (0..decks).flat_map(move |dj| (0..games).map(move |k| Cell { i, j, di, dj, k })))
        })
    })
}

/// Seed of one game, a pure function of its coordinates.
pub fn match_seed(master: u64, round: u64, id_i: GenomeId, id_j: GenomeId, cell: &Cell) -> u64 {
    seed::derive(master, &[round, id_i, id_j, cell.di as u64, cell.dj as u64, u64::from(cell.k)])
}

/// Plays the full round robin among `agents`. `round` separates the
/// seed spaces of successive evaluations. Games run on the current
/// rayon pool; records come back in schedule order.
pub fn run_round_robin(
    agents: &[(GenomeId, WeightVector)],
    decks: &[Deck],
    games: u32,
    master: u64,
    round: u64,
    turn_cap: u32,
) -> Result<Vec<MatchRecord>, EvolutionError> {
    let cells: Vec<Cell> = round_robin(agents.len(), decks.len(), games).collect();
    let options = MatchOptions { turn_cap, record_replay: false };
    cells
        .into_par_iter()
        .map(|cell| {
            let (id_i, w_i) = agents[cell.i];
            let (id_j, w_j) = agents[cell.j];
            let seed = match_seed(master, round, id_i, id_j, &cell);
            let first = cell.first();
            let (a, b) = if first == cell.i { (cell.i, cell.j) } else { (cell.j, cell.i) };
            let (wa, wb, da, db) = if first == cell.i {
                (w_i, w_j, &decks[cell.di], &decks[cell.dj])
            } else {
                (w_j, w_i, &decks[cell.dj], &decks[cell.di])
            };
            let mut pa = greedy_policy(wa);
            let mut pb = greedy_policy(wb);
            let (result, _) = play_match_with(&mut pa, &mut pb, da, db, seed, options).map_err(|e| {
                let genome = match e {
                    EngineError::PolicyIllegalAction { side, .. } => agents[[a, b][side]].0,
                    _ => agents[a].0,
                };
                EvolutionError::Policy { genome, source: e }
            })?;
            let winner = match result.outcome {
                Outcome::WinA => Some(a),
                Outcome::WinB => Some(b),
                _ => None,
            };
            Ok(MatchRecord { cell, seed, winner, turns: result.turns })
        })
        .collect()
}
