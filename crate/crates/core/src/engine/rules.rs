//! Action resolution.

use rand::Rng;

use crate::cards::{AbilityFlag, AbilitySet, CardId, CardKind, Effect, HeroClass, Rarity, Secret, TargetRule};

use super::actions::{Action, Target};
use super::state::{GameState, MinionInstance, Weapon};
use super::{EngineError, Outcome, HERO_POWER_COST, MAX_BOARD};

/// A character in absolute (side index) coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CharRef {
    Hero(usize),
    Minion(usize, usize),
}

/// The minion dealing damage, for poison and lifesteal.
#[derive(Debug, Clone, Copy)]
struct Source {
    owner: usize,
    abilities: AbilitySet,
}

const TOTEM_HEALTH: i32 = 2;
const TOTEM_COST: u8 = 1;

impl GameState {
    /// Resolves `action` on a copy of the state.
    pub fn apply_action(&self, action: Action) -> Result<GameState, EngineError> {
        let legal = self.legal_actions()?;
        if !legal.contains(&action) {
            return Err(EngineError::IllegalAction(action));
        }
        let mut next = self.clone();
        next.resolve(action);
        Ok(next)
    }

    /// Resolves an action already known to be legal.
    pub(crate) fn resolve(&mut self, action: Action) {
        match action {
            Action::PlayCard { hand_index, target } => self.play_card(hand_index as usize, target),
            Action::MinionAttack { attacker, target } => self.minion_attack(attacker as usize, target),
            Action::WeaponAttack { target } => self.weapon_attack(target),
            Action::HeroPower { target } => self.hero_power(target),
            Action::EndTurn => self.end_turn(),
        }
        self.sweep_deaths();
    }

    /// Win/draw status. Armor has already absorbed damage by the time health is read.
    pub fn outcome(&self) -> Outcome {
        let a_dead = self.sides[0].health <= 0;
        let b_dead = self.sides[1].health <= 0;
        match (a_dead, b_dead) {
            (true, true) => Outcome::Draw,
            (false, true) => Outcome::WinA,
            (true, false) => Outcome::WinB,
            (false, false) if self.turn > self.turn_cap => Outcome::Draw,
            (false, false) => Outcome::Ongoing,
        }
    }

    fn to_ref(&self, target: Target) -> CharRef {
        let me = self.active;
        let foe = 1 - me;
        match target {
            Target::EnemyHero => CharRef::Hero(foe),
            Target::OwnHero => CharRef::Hero(me),
            Target::EnemyMinion(i) => CharRef::Minion(foe, i as usize),
            Target::OwnMinion(i) => CharRef::Minion(me, i as usize),
        }
    }

    fn play_card(&mut self, hand_index: usize, target: Option<Target>) {
        let me = self.active;
        let card = self.sides[me].hand.remove(hand_index);
        let spec = self.catalog.get(card).clone();
        self.sides[me].mana_available -= spec.mana_cost;
        let chosen = target.map(|t| self.to_ref(t));

        match spec.kind {
            CardKind::Minion => {
                let id = self.alloc_minion_id();
                self.sides[me].battlefield.push(MinionInstance::from_card(id, card, &spec));
                if let Some(effect) = spec.play_effect() {
                    self.resolve_effect(me, *effect, chosen);
                }
            }
            CardKind::Spell => match spec.effect {
                Some(Effect::Secret(secret)) => self.sides[me].secrets.push((card, secret)),
                Some(effect) => self.resolve_effect(me, effect, chosen),
                None => {}
            },
            CardKind::Weapon => {
                self.equip(me, card);
                if let Some(effect) = spec.effect {
                    self.resolve_effect(me, effect, chosen);
                }
            }
        }
    }

    fn equip(&mut self, side: usize, card: CardId) {
        let spec = self.catalog.get(card);
        self.sides[side].weapon = Some(Weapon { card, attack: spec.attack, durability: spec.durability });
    }

    fn summon(&mut self, side: usize, card: CardId) {
        if self.sides[side].battlefield.len() >= MAX_BOARD {
            return;
        }
        let id = self.alloc_minion_id();
        let spec = self.catalog.get(card).clone();
        self.sides[side].battlefield.push(MinionInstance::from_card(id, card, &spec));
    }

    fn resolve_effect(&mut self, owner: usize, effect: Effect, chosen: Option<CharRef>) {
        let foe = 1 - owner;
        match effect {
            Effect::DealDamage { amount, target } => {
                let amount = i32::from(amount);
                let hits: Vec<CharRef> = match target {
                    TargetRule::Any | TargetRule::Minion | TargetRule::Enemy | TargetRule::EnemyMinion => {
                        chosen.into_iter().collect()
                    }
                    TargetRule::EnemyHero => vec![CharRef::Hero(foe)],
                    TargetRule::RandomEnemy => {
                        let pool = self.living_characters(foe, true);
                        let pick = self.rng.random_range(0..pool.len());
                        vec![pool[pick]]
                    }
                    TargetRule::AllEnemyMinions => self.living_characters(foe, false),
                    TargetRule::AllMinions => {
                        let mut v = self.living_characters(owner, false);
                        v.extend(self.living_characters(foe, false));
                        v
                    }
                    TargetRule::AllEnemies => self.living_characters(foe, true),
                };
                for hit in hits {
                    self.damage(hit, amount, None);
                }
            }
            Effect::Heal { amount } => self.sides[owner].heal(i32::from(amount)),
            Effect::Draw { count } => {
                for _ in 0..count {
                    self.sides[owner].draw();
                }
            }
            Effect::GainArmor { amount } => self.sides[owner].armor += i32::from(amount),
            Effect::Summon { card } => self.summon(owner, card),
            Effect::Equip { card } => self.equip(owner, card),
            Effect::Secret(secret) => {
                // Only reachable if a non-spell carried a secret; catalogs reject that.
                debug_assert!(false, "secret resolved as an effect: {secret:?}");
            }
        }
    }

    /// Hero (if requested) then minions with positive health, left to right.
    fn living_characters(&self, side: usize, include_hero: bool) -> Vec<CharRef> {
        let mut v = Vec::with_capacity(8);
        if include_hero {
            v.push(CharRef::Hero(side));
        }
        v.extend(
            self.sides[side]
                .battlefield
                .iter()
                .enumerate()
                .filter(|(_, m)| m.is_alive())
                .map(|(i, _)| CharRef::Minion(side, i)),
        );
        v
    }

    /// Applies `amount` damage and returns how much actually landed.
    fn damage(&mut self, target: CharRef, amount: i32, source: Option<Source>) -> i32 {
        if amount <= 0 {
            return 0;
        }
        let dealt = match target {
            CharRef::Hero(side) => {
                self.sides[side].take_damage(amount);
                amount
            }
            CharRef::Minion(side, slot) => {
                let m = &mut self.sides[side].battlefield[slot];
                if m.has(AbilityFlag::DivineShield) {
                    m.abilities.remove(AbilityFlag::DivineShield);
                    0
                } else {
                    m.health -= amount;
                    if source.is_some_and(|s| s.abilities.contains(AbilityFlag::Poison)) {
                        m.health = m.health.min(0);
                    }
                    amount
                }
            }
        };
        if let Some(src) = source {
            if dealt > 0 && src.abilities.contains(AbilityFlag::LifeSteal) {
                self.sides[src.owner].heal(dealt);
            }
        }
        dealt
    }

    fn minion_source(&self, side: usize, slot: usize) -> Source {
        Source { owner: side, abilities: self.sides[side].battlefield[slot].abilities }
    }

    /// Fires every secret guarding `defender`'s hero against an attack
    /// launched by the other side.
    fn trigger_secrets(&mut self, defender: usize) {
        let secrets = std::mem::take(&mut self.sides[defender].secrets);
        for (_, secret) in secrets {
            match secret {
                Secret::Armor(n) => self.sides[defender].armor += i32::from(n),
                Secret::Trap(n) => {
                    for hit in self.living_characters(1 - defender, true) {
                        self.damage(hit, i32::from(n), None);
                    }
                }
            }
        }
    }

    fn minion_attack(&mut self, attacker: usize, target: Target) {
        let me = self.active;
        {
            let m = &mut self.sides[me].battlefield[attacker];
            m.abilities.remove(AbilityFlag::Stealth);
            m.attacks_remaining -= 1;
        }
        let target = self.to_ref(target);
        if let CharRef::Hero(defender) = target {
            self.trigger_secrets(defender);
            if !self.sides[me].battlefield[attacker].is_alive() {
                return;
            }
        }
        let attack = self.sides[me].battlefield[attacker].attack;
        let attacker_src = self.minion_source(me, attacker);
        let counter = match target {
            CharRef::Minion(side, slot) => {
                Some((self.sides[side].battlefield[slot].attack, self.minion_source(side, slot)))
            }
            CharRef::Hero(_) => None,
        };
        self.damage(target, attack, Some(attacker_src));
        if let Some((counter_attack, counter_src)) = counter {
            self.damage(CharRef::Minion(me, attacker), counter_attack, Some(counter_src));
        }
    }

    fn weapon_attack(&mut self, target: Target) {
        let me = self.active;
        self.sides[me].hero_attacked = true;
        let target = self.to_ref(target);
        if let CharRef::Hero(defender) = target {
            self.trigger_secrets(defender);
            if self.sides[me].health <= 0 {
                return;
            }
        }
        let attack = self.sides[me].attack_damage();
        let counter = match target {
            CharRef::Minion(side, slot) => {
                Some((self.sides[side].battlefield[slot].attack, self.minion_source(side, slot)))
            }
            CharRef::Hero(_) => None,
        };
        self.damage(target, attack, None);
        if let Some((counter_attack, counter_src)) = counter {
            self.damage(CharRef::Hero(me), counter_attack, Some(counter_src));
        }
        if let Some(w) = self.sides[me].weapon.as_mut() {
            w.durability -= 1;
            if w.durability == 0 {
                self.sides[me].weapon = None;
            }
        }
    }

    fn hero_power(&mut self, target: Option<Target>) {
        let me = self.active;
        self.sides[me].mana_available -= HERO_POWER_COST;
        self.sides[me].hero_power_used = true;
        match self.sides[me].class {
            HeroClass::Warrior => self.sides[me].armor += 2,
            HeroClass::Shaman => {
                if self.sides[me].battlefield.len() < MAX_BOARD {
                    let id = self.alloc_minion_id();
                    self.sides[me].battlefield.push(MinionInstance {
                        id,
                        card: None,
                        mana_cost: TOTEM_COST,
                        rarity: Rarity::COMMON,
                        attack: 0,
                        health: TOTEM_HEALTH,
                        max_health: TOTEM_HEALTH,
                        abilities: AbilitySet::empty(),
                        effect: None,
                        attacks_remaining: 0,
                        entered_this_turn: true,
                    });
                }
            }
            HeroClass::Mage => {
                if let Some(t) = target {
                    let r = self.to_ref(t);
                    self.damage(r, 1, None);
                }
            }
        }
        // Inspire: minions on the board when the power was used, left to right.
        let inspired: Vec<Effect> = self.sides[me]
            .battlefield
            .iter()
            .filter(|m| m.is_alive() && m.has(AbilityFlag::Inspire))
            .filter_map(|m| m.effect)
            .collect();
        for effect in inspired {
            self.resolve_effect(me, effect, None);
        }
    }

    fn end_turn(&mut self) {
        self.turn += 1;
        self.active = 1 - self.active;
        let side = &mut self.sides[self.active];
        side.begin_turn();
        side.draw();
    }

    /// Removes dead minions (active side first, left to right) and resolves
    /// their deathrattles, repeating until the board is stable.
    fn sweep_deaths(&mut self) {
        loop {
            let mut rattles: Vec<(usize, Effect)> = Vec::new();
            let mut any_dead = false;
            for side in [self.active, 1 - self.active] {
                let board = &mut self.sides[side].battlefield;
                for m in board.iter().filter(|m| !m.is_alive()) {
                    any_dead = true;
                    if m.has(AbilityFlag::Deathrattle) {
                        if let Some(e) = m.effect {
                            rattles.push((side, e));
                        }
                    }
                }
                board.retain(MinionInstance::is_alive);
            }
            if !any_dead {
                break;
            }
            for (owner, effect) in rattles {
                self.resolve_effect(owner, effect, None);
            }
        }
    }
}
