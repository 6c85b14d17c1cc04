use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ranksum::ranksum_test;
use super::winrate::PlayedMatch;

/// Significance level used to flag comparisons.
pub const SIGNIFICANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareMode {
    /// Each group's agents with deck `d1` against anyone holding `d2`.
    AnyOpponent,
    /// Agents of one group with `d1` against agents of the other with `d2`.
    HeadToHead,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareCell {
    pub first: usize,
    pub second: usize,
    pub own_deck: usize,
    pub opponent_deck: usize,
    pub n_first: usize,
    pub n_second: usize,
    pub statistic: f64,
    pub p_value: f64,
    /// Positive when the first group wins more often.
    pub direction: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareGrid {
    pub mode: CompareMode,
    pub groups: usize,
    pub decks: usize,
    pub cells: Vec<CompareCell>,
}

impl CompareGrid {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "first,second,own_deck,opponent_deck,n_first,n_second,statistic,p_value,direction,significant\n",
        );
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                c.first,
                c.second,
                c.own_deck,
                c.opponent_deck,
                c.n_first,
                c.n_second,
                c.statistic,
                c.p_value,
                c.direction,
                c.significant
            ));
        }
        out
    }
}

/// Wins and games of one agent in one deck combination, restricted to
/// opponents accepted by `opponents`.
fn rates<F: Fn(u64) -> bool>(
    matches: &[PlayedMatch],
    members: &[u64],
    own_deck: usize,
    opponent_deck: usize,
    opponents: F,
) -> Vec<f64> {
    let mut tally: BTreeMap<u64, (u64, u64)> = members.iter().map(|&a| (a, (0, 0))).collect();
    for m in matches {
        for seat in 0..2 {
            let (me, foe) = (m.agents[seat], m.agents[1 - seat]);
            if m.decks[seat] != own_deck || m.decks[1 - seat] != opponent_deck || !opponents(foe) {
                continue;
            }
            if let Some(t) = tally.get_mut(&me) {
                t.1 += 1;
                t.0 += u64::from(m.winner == Some(seat));
            }
        }
    }
    tally.values().filter(|(_, games)| *games > 0).map(|&(wins, games)| wins as f64 / games as f64).collect()
}

/// Rank-sum comparison of every pair of groups over every deck
/// combination. `group_of` maps agent ids to group indices; agents
/// without a group still serve as opponents in any-opponent mode.
pub fn compare_groups(
    matches: &[PlayedMatch],
    group_of: &BTreeMap<u64, usize>,
    decks: usize,
    mode: CompareMode,
) -> CompareGrid {
    let groups = group_of.values().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); groups];
    for (&agent, &g) in group_of {
        members[g].push(agent);
    }
    let mut cells = Vec::new();
    for first in 0..groups {
        for second in first + 1..groups {
            for own_deck in 0..decks {
                for opponent_deck in 0..decks {
                    let (a, b) = match mode {
                        CompareMode::AnyOpponent => (
                            rates(matches, &members[first], own_deck, opponent_deck, |_| true),
                            rates(matches, &members[second], own_deck, opponent_deck, |_| true),
                        ),
                        CompareMode::HeadToHead => (
                            rates(matches, &members[first], own_deck, opponent_deck, |f| {
                                group_of.get(&f) == Some(&second)
                            }),
                            rates(matches, &members[second], own_deck, opponent_deck, |f| {
                                group_of.get(&f) == Some(&first)
                            }),
                        ),
                    };
                    if a.is_empty() || b.is_empty() {
                        continue;
                    }
                    let r = ranksum_test(&a, &b);
                    cells.push(CompareCell {
                        first,
                        second,
                        own_deck,
                        opponent_deck,
                        n_first: a.len(),
                        n_second: b.len(),
                        statistic: r.statistic,
                        p_value: r.p_value,
                        direction: r.direction(a.len(), b.len()),
                        significant: r.p_value < SIGNIFICANCE,
                    });
                }
            }
        }
    }
    CompareGrid { mode, groups, decks, cells }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Group 0 agents (ids 0..5) always beat group 1 agents (ids 5..10).
    fn dominated() -> (Vec<PlayedMatch>, BTreeMap<u64, usize>) {
        let mut ms = Vec::new();
        for a in 0..5u64 {
            for b in 5..10u64 {
                ms.push(PlayedMatch { agents: [a, b], decks: [0, 0], winner: Some(0) });
                ms.push(PlayedMatch { agents: [b, a], decks: [0, 0], winner: Some(1) });
            }
        }
        let groups = (0..10u64).map(|a| (a, usize::from(a >= 5))).collect();
        (ms, groups)
    }

    #[test]
    fn head_to_head_flags_dominance() {
        let (ms, groups) = dominated();
        for mode in [CompareMode::HeadToHead, CompareMode::AnyOpponent] {
            let grid = compare_groups(&ms, &groups, 1, mode);
            assert_eq!(grid.cells.len(), 1);
            let c = &grid.cells[0];
            assert!(c.direction > 0.0);
            assert!(c.significant, "{mode:?} p = {}", c.p_value);
            // 5 vs 5 fully separated: 2 / C(10, 5).
            assert!((c.p_value - 2.0 / 252.0).abs() < 1e-12);
        }
        assert!(grid_csv_has_header(&compare_groups(&ms, &groups, 1, CompareMode::HeadToHead)));
    }

    fn grid_csv_has_header(g: &CompareGrid) -> bool {
        g.to_csv().starts_with("first,second,")
    }

    #[test]
    fn missing_combinations_are_skipped() {
        let (ms, groups) = dominated();
        let grid = compare_groups(&ms, &groups, 2, CompareMode::AnyOpponent);
        assert_eq!(grid.cells.len(), 1);
    }
}
