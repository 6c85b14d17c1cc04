//! Effect scripts: the closed set of card behaviours the engine interprets.
//!
//! Scripts are written in card files as `name(arg, ...)`, e.g.
//! `deal-damage(3, any)`, `draw(1)`, `summon(Jade Golem)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::CardId;

/// Who an effect hits. Selectors ending in a chosen target require the
/// player to pick one when the card is played.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TargetRule {
    /// Chosen: any character.
    Any,
    /// Chosen: any minion.
    Minion,
    /// Chosen: an enemy character.
    Enemy,
    /// Chosen: an enemy minion.
    EnemyMinion,
    EnemyHero,
    /// One enemy character picked by the match PRNG.
    RandomEnemy,
    AllEnemyMinions,
    AllMinions,
    AllEnemies,
}

impl TargetRule {
    pub fn is_chosen(self) -> bool {
        matches!(self, TargetRule::Any | TargetRule::Minion | TargetRule::Enemy | TargetRule::EnemyMinion)
    }

    pub fn keyword(self) -> &'static str {
        match self {
            TargetRule::Any => "any",
            TargetRule::Minion => "minion",
            TargetRule::Enemy => "enemy",
            TargetRule::EnemyMinion => "enemy-minion",
            TargetRule::EnemyHero => "enemy-hero",
            TargetRule::RandomEnemy => "random-enemy",
            TargetRule::AllEnemyMinions => "all-enemy-minions",
            TargetRule::AllMinions => "all-minions",
            TargetRule::AllEnemies => "all-enemies",
        }
    }

    fn from_keyword(word: &str) -> Option<Self> {
        const ALL: [TargetRule; 9] = [
            TargetRule::Any,
            TargetRule::Minion,
            TargetRule::Enemy,
            TargetRule::EnemyMinion,
            TargetRule::EnemyHero,
            TargetRule::RandomEnemy,
            TargetRule::AllEnemyMinions,
            TargetRule::AllMinions,
            TargetRule::AllEnemies,
        ];
        ALL.into_iter().find(|t| t.keyword() == word)
    }
}

/// Secrets sit face-down beside their owner and fire when an enemy
/// character attacks the owner's hero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Secret {
    /// Owner gains armor before the attack lands.
    Armor(u8),
    /// Deals damage to every enemy character before the attack lands.
    Trap(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Effect {
    DealDamage {
        amount: u8,
        target: TargetRule,
    },
    /// Restores health to the owner's hero.
    Heal {
        amount: u8,
    },
    Draw {
        count: u8,
    },
    GainArmor {
        amount: u8,
    },
    Summon {
        card: CardId,
    },
    Equip {
        card: CardId,
    },
    Secret(Secret),
}

impl Effect {
    pub fn chosen_target(&self) -> Option<TargetRule> {
        match self {
            Effect::DealDamage { target, .. } if target.is_chosen() => Some(*target),
            _ => None,
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Effect::DealDamage { target: TargetRule::RandomEnemy, .. })
    }
}

/// Syntactic form of a script before card names are resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RawEffect {
    DealDamage(u8, TargetRule),
    Heal(u8),
    Draw(u8),
    GainArmor(u8),
    Summon(String),
    Equip(String),
    Secret(Secret),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ScriptError {
    /// Well-formed call syntax but the script name is not implemented.
    Unknown(String),
    Malformed(String),
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptError::Unknown(s) => write!(f, "unknown effect script `{s}`"),
            ScriptError::Malformed(s) => write!(f, "malformed effect script: {s}"),
        }
    }
}

pub(crate) fn parse_script(text: &str) -> Result<RawEffect, ScriptError> {
    let text = text.trim();
    let open = text.find('(').ok_or_else(|| ScriptError::Malformed(format!("`{text}` has no argument list")))?;
    if !text.ends_with(')') {
        return Err(ScriptError::Malformed(format!("`{text}` is missing `)`")));
    }
    let name = text[..open].trim();
    let args: Vec<&str> = text[open + 1..text.len() - 1].split(',').map(str::trim).filter(|a| !a.is_empty()).collect();

    let number = |i: usize| -> Result<u8, ScriptError> {
        args.get(i)
            .ok_or_else(|| ScriptError::Malformed(format!("`{text}` needs argument {}", i + 1)))?
            .parse::<u8>()
            .map_err(|_| ScriptError::Malformed(format!("`{text}` argument {} is not a number", i + 1)))
    };
    let arity = |n: usize| -> Result<(), ScriptError> {
        if args.len() == n {
            Ok(())
        } else {
            Err(ScriptError::Malformed(format!("`{text}` takes {n} argument(s), got {}", args.len())))
        }
    };

    match name {
        "deal-damage" => {
            arity(2)?;
            let target = TargetRule::from_keyword(args[1])
                .ok_or_else(|| ScriptError::Malformed(format!("unknown target `{}`", args[1])))?;
            Ok(RawEffect::DealDamage(number(0)?, target))
        }
        "heal" => arity(1).and_then(|_| number(0)).map(RawEffect::Heal),
        "draw" => arity(1).and_then(|_| number(0)).map(RawEffect::Draw),
        "gain-armor" => arity(1).and_then(|_| number(0)).map(RawEffect::GainArmor),
        "secret-armor" => arity(1).and_then(|_| number(0)).map(|n| RawEffect::Secret(Secret::Armor(n))),
        "secret-trap" => arity(1).and_then(|_| number(0)).map(|n| RawEffect::Secret(Secret::Trap(n))),
        "summon" | "equip" => {
            // Card names may contain commas only in theory; none in the shipped pool do.
            let inner = text[open + 1..text.len() - 1].trim();
            if inner.is_empty() {
                return Err(ScriptError::Malformed(format!("`{text}` needs a card name")));
            }
            Ok(if name == "summon" {
                RawEffect::Summon(inner.to_string())
            } else {
                RawEffect::Equip(inner.to_string())
            })
        }
        other => Err(ScriptError::Unknown(other.to_string())),
    }
}
