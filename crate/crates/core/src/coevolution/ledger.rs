use serde::{Deserialize, Serialize};

use super::genome::GenomeId;
use super::tournament::MatchRecord;

/// Victory tensor of one round-robin evaluation.
///
/// `wins(i, j, di, dj)` counts games that pool member `i`, playing deck
/// `di`, won against member `j` playing deck `dj`. Positions index the
/// evaluated pool; `ids` maps them back to genomes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FitnessLedger {
    pub ids: Vec<GenomeId>,
    pub decks: usize,
    pub games_per_pairing: u32,
    wins: Vec<u32>,
    draws: Vec<u32>,
}

impl FitnessLedger {
    pub fn new(ids: Vec<GenomeId>, decks: usize, games_per_pairing: u32) -> Self {
        let n = ids.len();
        FitnessLedger {
            ids,
            decks,
            games_per_pairing,
            wins: vec![0; n * n * decks * decks],
            draws: vec![0; n * n * decks * decks],
        }
    }

    /// Builds the ledger from the records of a complete round robin.
    pub fn from_records(ids: Vec<GenomeId>, decks: usize, games_per_pairing: u32, records: &[MatchRecord]) -> Self {
        let mut ledger = Self::new(ids, decks, games_per_pairing);
        for r in records {
            ledger.record(r);
        }
        ledger
    }

    fn index(&self, i: usize, j: usize, di: usize, dj: usize) -> usize {
        let n = self.ids.len();
        let d = self.decks;
        ((i * n + j) * d + di) * d + dj
    }

    pub fn record(&mut self, r: &MatchRecord) {
        let c = r.cell;
        match r.winner {
            Some(w) if w == c.i => {
                let k = self.index(c.i, c.j, c.di, c.dj);
                self.wins[k] += 1;
            }
            Some(_) => {
                let k = self.index(c.j, c.i, c.dj, c.di);
                self.wins[k] += 1;
            }
            None => {
                let a = self.index(c.i, c.j, c.di, c.dj);
                let b = self.index(c.j, c.i, c.dj, c.di);
                self.draws[a] += 1;
                self.draws[b] += 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn wins(&self, i: usize, j: usize, di: usize, dj: usize) -> u32 {
        self.wins[self.index(i, j, di, dj)]
    }

    /// Drawn games between `i` (deck `di`) and `j` (deck `dj`).
    pub fn draws(&self, i: usize, j: usize, di: usize, dj: usize) -> u32 {
        self.draws[self.index(i, j, di, dj)]
    }

    /// Total victories of pool member `i`.
    pub fn total(&self, i: usize) -> u64 {
        let stride = self.ids.len() * self.decks * self.decks;
        self.wins[i * stride..(i + 1) * stride].iter().map(|&w| u64::from(w)).sum()
    }

    pub fn fitness(&self) -> Vec<u64> {
        (0..self.ids.len()).map(|i| self.total(i)).collect()
    }

    /// Number of drawn games (each counted once).
    pub fn total_draws(&self) -> u64 {
        self.draws.iter().map(|&d| u64::from(d)).sum::<u64>() / 2
    }

    /// `C(n, 2) · decks² · games`.
    pub fn total_games(&self) -> u64 {
        let n = self.ids.len() as u64;
        n * n.saturating_sub(1) / 2 * (self.decks as u64).pow(2) * u64::from(self.games_per_pairing)
    }

    pub fn max_possible(&self) -> u64 {
        super::max_fitness(self.ids.len(), self.games_per_pairing, self.decks)
    }

    /// Position of `id` in the pool.
    pub fn position(&self, id: GenomeId) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    /// Ledger where every member won every game it played; such a
    /// ledger is impossible in practice but pins the arithmetic bound.
    pub fn saturated(ids: Vec<GenomeId>, decks: usize, games_per_pairing: u32) -> Self {
        let mut ledger = Self::new(ids, decks, games_per_pairing);
        let n = ledger.ids.len();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for di in 0..decks {
                    for dj in 0..decks {
                        let k = ledger.index(i, j, di, dj);
                        ledger.wins[k] = games_per_pairing;
                    }
                }
            }
        }
        ledger
    }
}
