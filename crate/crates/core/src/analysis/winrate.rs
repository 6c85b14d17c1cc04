use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::AnalysisError;

/// One finished game. Index 0 is the first player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayedMatch {
    pub agents: [u64; 2],
    pub decks: [usize; 2],
    /// Seat of the winner, `None` on a draw.
    pub winner: Option<usize>,
}

/// Victory percentages of row deck against column deck. Every game
/// counts once from each player's point of view, so a mirror match adds
/// one win and two games to the diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinrateMatrix {
    pub labels: Vec<String>,
    pub wins: Vec<Vec<u64>>,
    pub games: Vec<Vec<u64>>,
}

impl WinrateMatrix {
    /// Percentage, or `None` when the pairing was never played.
    pub fn cell(&self, row: usize, col: usize) -> Option<f64> {
        let games = self.games[row][col];
        (games > 0).then(|| 100.0 * self.wins[row][col] as f64 / games as f64)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Row label followed by one column per deck; absent cells are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("deck");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (r, label) in self.labels.iter().enumerate() {
            out.push_str(label);
            for c in 0..self.labels.len() {
                out.push(',');
                if let Some(p) = self.cell(r, c) {
                    let _ = write!(out, "{p:.2}");
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Aggregates `matches` by deck. With `include`, only the perspectives
/// of agents it accepts are counted; their opponents may be anyone.
pub fn winrate_matrix(
    matches: &[PlayedMatch],
    labels: &[String],
    include: Option<&dyn Fn(u64) -> bool>,
) -> Result<WinrateMatrix, AnalysisError> {
    if matches.is_empty() {
        return Err(AnalysisError::EmptyMatchSet);
    }
    let n = labels.len();
    let mut wins = vec![vec![0u64; n]; n];
    let mut games = vec![vec![0u64; n]; n];
    for m in matches {
        for seat in 0..2 {
            let (row, col) = (m.decks[seat], m.decks[1 - seat]);
            if row >= n {
                return Err(AnalysisError::UnknownDeck(row));
            }
            if col >= n {
                return Err(AnalysisError::UnknownDeck(col));
            }
            if include.is_some_and(|f| !f(m.agents[seat])) {
                continue;
            }
            games[row][col] += 1;
            if m.winner == Some(seat) {
                wins[row][col] += 1;
            }
        }
    }
    Ok(WinrateMatrix { labels: labels.to_vec(), wins, games })
}
