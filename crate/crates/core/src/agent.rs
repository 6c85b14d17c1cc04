//! Weighted greedy agent.
//!
//! For every legal action the agent simulates the action on a forked copy of
//! the state and scores the change:
//!
//! ```text
//! score = Δ_enemy − Δ_agent − Δ_mana
//! Δ_hero = w1·Δ(health+armor) + w2·Δ(attack)
//!        + w3·Σ_alive Δhealth(m)·value(m) + w4·Σ_alive Δattack(m)·value(m)
//!        + w_kill·Σ_killed value(m) − w_appear·Σ_new value(m)
//!        + w7·Δ(secrets)
//! Δ_mana = w8·(mana spent)
//! ```
//!
//! where every Δx is `before − after`, so reductions are positive, and
//! `value(m)` is the dot product of `w9..w21` with the minion's attribute
//! vector. The best-scoring action is played; ties go to the earliest
//! action in enumeration order, and `EndTurn` wins only when strictly best.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cards::AbilityFlag;
use crate::engine::{Action, EngineError, GameState, MinionInstance, Policy};

pub const WEIGHT_COUNT: usize = 21;

/// Weight positions, named by their acronyms.
pub mod idx {
    pub const HHR: usize = 0;
    pub const HAR: usize = 1;
    pub const BMHR: usize = 2;
    pub const BMAR: usize = 3;
    pub const BMA: usize = 4;
    pub const BMK: usize = 5;
    pub const BSR: usize = 6;
    pub const BMR: usize = 7;
    pub const MH: usize = 8;
    pub const MA: usize = 9;
    pub const MHC: usize = 10;
    pub const MHD: usize = 11;
    pub const MHDS: usize = 12;
    pub const MHI: usize = 13;
    pub const MHLS: usize = 14;
    pub const MHS: usize = 15;
    pub const MHT: usize = 16;
    pub const MHW: usize = 17;
    pub const MHP: usize = 18;
    pub const MR: usize = 19;
    pub const MM: usize = 20;
}

/// Weight multiplying the value of killed minions.
pub const W_KILL: usize = idx::BMK;
/// Weight multiplying the value of newly appeared minions.
pub const W_APPEAR: usize = idx::BMA;

pub const WEIGHT_LABELS: [&str; WEIGHT_COUNT] = [
    "HHR", "HAR", "BMHR", "BMAR", "BMA", "BMK", "BSR", "BMR", "MH", "MA", "MHC", "MHD", "MHDS", "MHI", "MHLS", "MHS",
    "MHT", "MHW", "MHP", "MR", "MM",
];

/// Index of the first minion-value weight (`MH`).
const VALUE_OFFSET: usize = idx::MH;
const VALUE_LEN: usize = WEIGHT_COUNT - VALUE_OFFSET;

#[derive(Debug, Error, PartialEq)]
pub enum WeightError {
    #[error("expected {WEIGHT_COUNT} weights, got {0}")]
    Length(usize),
    #[error("weight {index} = {value} is outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },
}

/// 21 behaviour weights, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector([f64; WEIGHT_COUNT]);

impl WeightVector {
    pub fn new(weights: [f64; WEIGHT_COUNT]) -> Result<Self, WeightError> {
        for (index, &value) in weights.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(WeightError::OutOfRange { index, value });
            }
        }
        Ok(WeightVector(weights))
    }

    pub fn from_slice(weights: &[f64]) -> Result<Self, WeightError> {
        let arr: [f64; WEIGHT_COUNT] = weights.try_into().map_err(|_| WeightError::Length(weights.len()))?;
        Self::new(arr)
    }

    pub fn zeros() -> Self {
        WeightVector([0.0; WEIGHT_COUNT])
    }

    /// All zero except `index`, which is 1.
    pub fn unit(index: usize) -> Self {
        let mut w = [0.0; WEIGHT_COUNT];
        w[index] = 1.0;
        WeightVector(w)
    }

    pub fn with(mut self, index: usize, value: f64) -> Self {
        assert!((0.0..=1.0).contains(&value), "weight {value} outside [0, 1]");
        self.0[index] = value;
        self
    }

    pub fn as_array(&self) -> &[f64; WEIGHT_COUNT] {
        &self.0
    }

    pub fn get(&self, index: usize) -> f64 {
        self.0[index]
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = WeightError;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Self::from_slice(&v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0.to_vec()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (label, w)) in WEIGHT_LABELS.iter().zip(self.0.iter()).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{label}={w:.3}")?;
        }
        Ok(())
    }
}

/// The 13 attributes weighed by `w9..w21`: health, attack, the nine ability
/// indicators, rarity and mana cost.
pub fn minion_attributes(m: &MinionInstance) -> [f64; VALUE_LEN] {
    let flag = |f: AbilityFlag| if m.has(f) { 1.0 } else { 0.0 };
    [
        f64::from(m.health),
        f64::from(m.attack),
        flag(AbilityFlag::Charge),
        flag(AbilityFlag::Deathrattle),
        flag(AbilityFlag::DivineShield),
        flag(AbilityFlag::Inspire),
        flag(AbilityFlag::LifeSteal),
        flag(AbilityFlag::Stealth),
        flag(AbilityFlag::Taunt),
        flag(AbilityFlag::Windfury),
        flag(AbilityFlag::Poison),
        f64::from(m.rarity.value()),
        f64::from(m.mana_cost),
    ]
}

fn value_of_attributes(w: &WeightVector, attrs: &[f64; VALUE_LEN]) -> f64 {
    w.0[VALUE_OFFSET..].iter().zip(attrs.iter()).map(|(a, b)| a * b).sum()
}

pub fn value_of_minion(w: &WeightVector, m: &MinionInstance) -> f64 {
    value_of_attributes(w, &minion_attributes(m))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinionSnapshot {
    pub id: u32,
    pub health: i32,
    pub attack: i32,
    pub attributes: [f64; VALUE_LEN],
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeroSnapshot {
    pub health_armor: i32,
    pub attack_damage: i32,
    pub secrets: usize,
    pub mana_available: u8,
    pub minions: Vec<MinionSnapshot>,
}

/// The scored quantities of both heroes, read without touching the PRNG.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSnapshot {
    pub agent: HeroSnapshot,
    pub enemy: HeroSnapshot,
}

impl StateSnapshot {
    pub fn capture(state: &GameState, agent_side: usize) -> Self {
        let hero = |i: usize| {
            let s = state.side(i);
            HeroSnapshot {
                health_armor: s.health + s.armor,
                attack_damage: s.attack_damage(),
                secrets: s.secrets.len(),
                mana_available: s.mana_available,
                minions: s
                    .battlefield
                    .iter()
                    .map(|m| MinionSnapshot {
                        id: m.id,
                        health: m.health,
                        attack: m.attack,
                        attributes: minion_attributes(m),
                    })
                    .collect(),
            }
        };
        StateSnapshot { agent: hero(agent_side), enemy: hero(1 - agent_side) }
    }
}

/// A score split by how it scales with the weights: `hero` terms are
/// linear in `w`, `minion` terms are products of a battlefield weight and a
/// minion value, hence quadratic under uniform scaling.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScoreParts {
    pub hero: f64,
    pub minion: f64,
}

impl ScoreParts {
    pub fn total(self) -> f64 {
        self.hero + self.minion
    }
}

fn hero_delta(w: &WeightVector, before: &HeroSnapshot, after: &HeroSnapshot) -> ScoreParts {
    let w = &w.0;
    let hero = w[idx::HHR] * f64::from(before.health_armor - after.health_armor)
        + w[idx::HAR] * f64::from(before.attack_damage - after.attack_damage)
        + w[idx::BSR] * (before.secrets as f64 - after.secrets as f64);

    let value = |attrs: &[f64; VALUE_LEN]| -> f64 { w[VALUE_OFFSET..].iter().zip(attrs).map(|(a, b)| a * b).sum() };
    let mut health_term = 0.0;
    let mut attack_term = 0.0;
    let mut killed = 0.0;
    for m in &before.minions {
        match after.minions.iter().find(|n| n.id == m.id) {
            Some(n) => {
                let v = value(&m.attributes);
                health_term += f64::from(m.health - n.health) * v;
                attack_term += f64::from(m.attack - n.attack) * v;
            }
            None => killed += value(&m.attributes),
        }
    }
    let appeared: f64 = after
        .minions
        .iter()
        .filter(|n| !before.minions.iter().any(|m| m.id == n.id))
        .map(|n| value(&n.attributes))
        .sum();

    ScoreParts {
        hero,
        minion: w[idx::BMHR] * health_term + w[idx::BMAR] * attack_term + w[W_KILL] * killed - w[W_APPEAR] * appeared,
    }
}

/// Scores the transition between two snapshots taken for the same agent.
pub fn score_transition(w: &WeightVector, before: &StateSnapshot, after: &StateSnapshot) -> ScoreParts {
    let enemy = hero_delta(w, &before.enemy, &after.enemy);
    let agent = hero_delta(w, &before.agent, &after.agent);
    let mana = w.0[idx::BMR] * (f64::from(before.agent.mana_available) - f64::from(after.agent.mana_available));
    ScoreParts { hero: enemy.hero - agent.hero - mana, minion: enemy.minion - agent.minion }
}

fn simulate(w: &WeightVector, state: &GameState, action: Action) -> ScoreParts {
    let me = state.active_index();
    let before = StateSnapshot::capture(state, me);
    let mut sim = state.forked();
    sim.resolve(action);
    let after = StateSnapshot::capture(&sim, me);
    score_transition(w, &before, &after)
}

/// Score of one action split into linear and minion parts.
pub fn score_parts(w: &WeightVector, state: &GameState, action: Action) -> Result<ScoreParts, EngineError> {
    if !state.legal_actions()?.contains(&action) {
        return Err(EngineError::IllegalAction(action));
    }
    Ok(simulate(w, state, action))
}

/// Scores `action` by simulating it on a fork of `state`. The live state
/// and its PRNG are untouched.
pub fn score_action(w: &WeightVector, state: &GameState, action: Action) -> Result<f64, EngineError> {
    score_parts(w, state, action).map(ScoreParts::total)
}

/// Every legal action with its score, in enumeration order.
pub fn score_all(w: &WeightVector, state: &GameState) -> Result<Vec<(Action, f64)>, EngineError> {
    Ok(state.legal_actions()?.into_iter().map(|a| (a, simulate(w, state, a).total())).collect())
}

/// The highest-scoring legal action.
pub fn select_action(w: &WeightVector, state: &GameState) -> Result<Action, EngineError> {
    let mut best = Action::EndTurn;
    let mut best_score = f64::NEG_INFINITY;
    for action in state.legal_actions()? {
        let score = simulate(w, state, action).total();
        if score > best_score {
            best = action;
            best_score = score;
        }
    }
    Ok(best)
}

/// A [`Policy`] playing [`select_action`] with fixed weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyAgent {
    pub weights: WeightVector,
}

impl Policy for GreedyAgent {
    fn select(&mut self, state: &GameState) -> Action {
        select_action(&self.weights, state).unwrap_or(Action::EndTurn)
    }
}

pub fn greedy_policy(weights: WeightVector) -> GreedyAgent {
    GreedyAgent { weights }
}
