use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cards::{CardKind, Effect, HeroClass, TargetRule};

use super::state::GameState;
use super::{EngineError, Outcome, HERO_POWER_COST, MAX_SECRETS};

/// A character, seen from the player to move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Target {
    EnemyHero,
    OwnHero,
    EnemyMinion(u8),
    OwnMinion(u8),
}

/// One legal move. The derived ordering is the enumeration order of
/// [`GameState::legal_actions`]: kind, then source index, then target,
/// with `EndTurn` last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    PlayCard { hand_index: u8, target: Option<Target> },
    MinionAttack { attacker: u8, target: Target },
    WeaponAttack { target: Target },
    HeroPower { target: Option<Target> },
    EndTurn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ActionKind {
    PlayCard,
    MinionAttack,
    WeaponAttack,
    HeroPower,
    EndTurn,
}

impl Action {
    pub fn kind(&self) -> ActionKind {
        match self {
            Action::PlayCard { .. } => ActionKind::PlayCard,
            Action::MinionAttack { .. } => ActionKind::MinionAttack,
            Action::WeaponAttack { .. } => ActionKind::WeaponAttack,
            Action::HeroPower { .. } => ActionKind::HeroPower,
            Action::EndTurn => ActionKind::EndTurn,
        }
    }

    pub fn target(&self) -> Option<Target> {
        match *self {
            Action::PlayCard { target, .. } | Action::HeroPower { target } => target,
            Action::MinionAttack { target, .. } | Action::WeaponAttack { target } => Some(target),
            Action::EndTurn => None,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::EnemyHero => write!(f, "enemy-hero"),
            Target::OwnHero => write!(f, "own-hero"),
            Target::EnemyMinion(i) => write!(f, "enemy-minion[{i}]"),
            Target::OwnMinion(i) => write!(f, "own-minion[{i}]"),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::PlayCard { hand_index, target } => {
                write!(f, "play[{hand_index}]")?;
                if let Some(t) = target {
                    write!(f, "->{t}")?;
                }
                Ok(())
            }
            Action::MinionAttack { attacker, target } => write!(f, "attack[{attacker}]->{target}"),
            Action::WeaponAttack { target } => write!(f, "weapon->{target}"),
            Action::HeroPower { target } => {
                write!(f, "power")?;
                if let Some(t) = target {
                    write!(f, "->{t}")?;
                }
                Ok(())
            }
            Action::EndTurn => write!(f, "end-turn"),
        }
    }
}

impl GameState {
    /// Every legal move for the player to move, in deterministic order.
    /// The list always ends with `EndTurn`.
    pub fn legal_actions(&self) -> Result<Vec<Action>, EngineError> {
        if self.outcome() != Outcome::Ongoing {
            return Err(EngineError::TerminalState);
        }
        let me = self.active_side();
        let mut actions = Vec::with_capacity(32);

        for (i, &card) in me.hand.iter().enumerate() {
            let spec = self.card(card);
            if spec.mana_cost > me.mana_available {
                continue;
            }
            let hand_index = i as u8;
            match spec.kind {
                CardKind::Minion => {
                    if me.board_full() {
                        continue;
                    }
                    match spec.play_effect().and_then(Effect::chosen_target) {
                        Some(rule) => {
                            let targets = self.effect_targets(rule);
                            if targets.is_empty() {
                                actions.push(Action::PlayCard { hand_index, target: None });
                            }
                            actions
                                .extend(targets.into_iter().map(|t| Action::PlayCard { hand_index, target: Some(t) }));
                        }
                        None => actions.push(Action::PlayCard { hand_index, target: None }),
                    }
                }
                CardKind::Spell => match spec.effect {
                    Some(Effect::Secret(_)) => {
                        let duplicate = me.secrets.iter().any(|(c, _)| *c == card);
                        if !duplicate && me.secrets.len() < MAX_SECRETS {
                            actions.push(Action::PlayCard { hand_index, target: None });
                        }
                    }
                    Some(effect) => match effect.chosen_target() {
                        Some(rule) => actions.extend(
                            self.effect_targets(rule)
                                .into_iter()
                                .map(|t| Action::PlayCard { hand_index, target: Some(t) }),
                        ),
                        None => actions.push(Action::PlayCard { hand_index, target: None }),
                    },
                    None => actions.push(Action::PlayCard { hand_index, target: None }),
                },
                CardKind::Weapon => actions.push(Action::PlayCard { hand_index, target: None }),
            }
        }

        let attack_targets = self.attack_targets();
        for (i, m) in me.battlefield.iter().enumerate() {
            if m.can_attack() {
                actions.extend(attack_targets.iter().map(|&target| Action::MinionAttack { attacker: i as u8, target }));
            }
        }

        if me.attack_damage() > 0 && !me.hero_attacked {
            actions.extend(attack_targets.iter().map(|&target| Action::WeaponAttack { target }));
        }

        if !me.hero_power_used && me.mana_available >= HERO_POWER_COST {
            match me.class {
                HeroClass::Warrior => actions.push(Action::HeroPower { target: None }),
                HeroClass::Shaman => {
                    if !me.board_full() {
                        actions.push(Action::HeroPower { target: None });
                    }
                }
                HeroClass::Mage => actions.extend(
                    self.effect_targets(TargetRule::Any).into_iter().map(|t| Action::HeroPower { target: Some(t) }),
                ),
            }
        }

        actions.push(Action::EndTurn);
        debug_assert!(actions.windows(2).all(|w| w[0] <= w[1]));
        Ok(actions)
    }

    /// Characters a chosen-target effect may hit. Enemy stealthed minions
    /// are excluded; taunt does not restrict effects.
    pub(crate) fn effect_targets(&self, rule: TargetRule) -> Vec<Target> {
        let me = self.active_side();
        let foe = self.opponent_side();
        let enemy_minions = foe
            .battlefield
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_alive() && !m.is_stealthed())
            .map(|(i, _)| Target::EnemyMinion(i as u8));
        let own_minions =
            me.battlefield.iter().enumerate().filter(|(_, m)| m.is_alive()).map(|(i, _)| Target::OwnMinion(i as u8));

        let mut out = Vec::new();
        match rule {
            TargetRule::Any => {
                out.push(Target::EnemyHero);
                out.push(Target::OwnHero);
                out.extend(enemy_minions);
                out.extend(own_minions);
            }
            TargetRule::Minion => {
                out.extend(enemy_minions);
                out.extend(own_minions);
            }
            TargetRule::Enemy => {
                out.push(Target::EnemyHero);
                out.extend(enemy_minions);
            }
            TargetRule::EnemyMinion => out.extend(enemy_minions),
            _ => {}
        }
        out
    }

    /// Characters an attacking minion or hero may hit: taunting enemy
    /// minions if any exist, otherwise the enemy hero and every visible
    /// enemy minion.
    pub(crate) fn attack_targets(&self) -> Vec<Target> {
        let foe = self.opponent_side();
        let taunts: Vec<Target> = foe
            .battlefield
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_taunting())
            .map(|(i, _)| Target::EnemyMinion(i as u8))
            .collect();
        if !taunts.is_empty() {
            return taunts;
        }
        let mut out = vec![Target::EnemyHero];
        out.extend(
            foe.battlefield
                .iter()
                .enumerate()
                .filter(|(_, m)| m.is_alive() && !m.is_stealthed())
                .map(|(i, _)| Target::EnemyMinion(i as u8)),
        );
        out
    }
}
