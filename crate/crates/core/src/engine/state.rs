use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cards::{AbilityFlag, AbilitySet, CardCatalog, CardId, CardSpec, Deck, Effect, HeroClass, Rarity, Secret};

use super::{DEFAULT_TURN_CAP, FIRST_PLAYER_HAND, MAX_BOARD, MAX_HAND, MAX_HEALTH, MAX_MANA, SECOND_PLAYER_HAND};

/// Stream offset used when the agent forks the match PRNG for look-ahead.
const FORK_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Weapon {
    pub card: CardId,
    pub attack: u8,
    pub durability: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinionInstance {
    /// Unique within a match; never reused.
    pub id: u32,
    /// `None` for hero-power tokens, which have no catalog card.
    pub card: Option<CardId>,
    pub mana_cost: u8,
    pub rarity: Rarity,
    pub attack: i32,
    pub health: i32,
    pub max_health: i32,
    pub abilities: AbilitySet,
    pub effect: Option<Effect>,
    pub attacks_remaining: u8,
    pub entered_this_turn: bool,
}

impl MinionInstance {
    pub(crate) fn from_card(id: u32, card: CardId, spec: &CardSpec) -> Self {
        let mut m = MinionInstance {
            id,
            card: Some(card),
            mana_cost: spec.mana_cost,
            rarity: spec.rarity,
            attack: i32::from(spec.attack),
            health: i32::from(spec.health),
            max_health: i32::from(spec.health),
            abilities: spec.abilities,
            effect: if spec.has_triggered_effect() { spec.effect } else { None },
            attacks_remaining: 0,
            entered_this_turn: true,
        };
        if m.has(AbilityFlag::Charge) {
            m.attacks_remaining = m.attacks_per_turn();
        }
        m
    }

    pub fn has(&self, flag: AbilityFlag) -> bool {
        self.abilities.contains(flag)
    }

    pub fn attacks_per_turn(&self) -> u8 {
        if self.has(AbilityFlag::Windfury) {
            2
        } else {
            1
        }
    }

    pub fn is_alive(&self) -> bool {
        self.health > 0
    }

    pub fn can_attack(&self) -> bool {
        self.attacks_remaining > 0 && self.attack > 0 && self.is_alive()
    }

    /// Hidden from enemy attacks and targeted effects.
    pub fn is_stealthed(&self) -> bool {
        self.has(AbilityFlag::Stealth)
    }

    pub fn is_taunting(&self) -> bool {
        self.has(AbilityFlag::Taunt) && !self.is_stealthed() && self.is_alive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeroSide {
    pub class: HeroClass,
    pub health: i32,
    pub armor: i32,
    pub weapon: Option<Weapon>,
    pub hero_attacked: bool,
    pub mana_crystals: u8,
    pub mana_available: u8,
    pub hand: Vec<CardId>,
    /// Top of the deck is the last element.
    pub draw_pile: Vec<CardId>,
    pub battlefield: Vec<MinionInstance>,
    pub secrets: Vec<(CardId, Secret)>,
    pub hero_power_used: bool,
    pub fatigue: u32,
    pub turns_started: u32,
}

impl HeroSide {
    fn new(class: HeroClass, draw_pile: Vec<CardId>) -> Self {
        HeroSide {
            class,
            health: MAX_HEALTH,
            armor: 0,
            weapon: None,
            hero_attacked: false,
            mana_crystals: 0,
            mana_available: 0,
            hand: Vec::with_capacity(MAX_HAND),
            draw_pile,
            battlefield: Vec::with_capacity(MAX_BOARD),
            secrets: Vec::new(),
            hero_power_used: false,
            fatigue: 0,
            turns_started: 0,
        }
    }

    pub fn attack_damage(&self) -> i32 {
        self.weapon.as_ref().map_or(0, |w| i32::from(w.attack))
    }

    pub fn weapon_durability(&self) -> u8 {
        self.weapon.as_ref().map_or(0, |w| w.durability)
    }

    pub fn board_full(&self) -> bool {
        self.battlefield.len() >= MAX_BOARD
    }

    pub(crate) fn begin_turn(&mut self) {
        self.turns_started += 1;
        self.mana_crystals = (self.turns_started.min(u32::from(MAX_MANA))) as u8;
        self.mana_available = self.mana_crystals;
        self.hero_power_used = false;
        self.hero_attacked = false;
        for m in &mut self.battlefield {
            m.entered_this_turn = false;
            m.attacks_remaining = m.attacks_per_turn();
        }
    }

    /// Draws the top card. An empty pile deals escalating fatigue damage;
    /// a full hand burns the drawn card.
    pub(crate) fn draw(&mut self) {
        match self.draw_pile.pop() {
            Some(card) => {
                if self.hand.len() < MAX_HAND {
                    self.hand.push(card);
                }
            }
            None => {
                self.fatigue += 1;
                self.take_damage(self.fatigue as i32);
            }
        }
    }

    /// Armor absorbs first, the remainder comes off health.
    pub(crate) fn take_damage(&mut self, amount: i32) {
        let absorbed = amount.min(self.armor);
        self.armor -= absorbed;
        self.health -= amount - absorbed;
    }

    pub(crate) fn heal(&mut self, amount: i32) {
        self.health = (self.health + amount).min(MAX_HEALTH);
    }
}

/// Full match state. Successor states are produced by
/// [`GameState::apply_action`]; the input state is never mutated.
#[derive(Debug, Clone, Serialize)]
pub struct GameState {
    pub(crate) sides: [HeroSide; 2],
    pub(crate) active: usize,
    pub(crate) turn: u32,
    pub(crate) turn_cap: u32,
    pub(crate) next_minion_id: u32,
    #[serde(skip)]
    pub(crate) rng: ChaCha8Rng,
    #[serde(skip)]
    pub(crate) catalog: Arc<CardCatalog>,
}

impl GameState {
    /// Starts a match: side 0 plays `deck_a` and moves first.
    ///
    /// Both decks must come from the same catalog.
    pub fn new(deck_a: &Deck, deck_b: &Deck, seed: u64) -> Self {
        Self::with_turn_cap(deck_a, deck_b, seed, DEFAULT_TURN_CAP)
    }

    pub fn with_turn_cap(deck_a: &Deck, deck_b: &Deck, seed: u64, turn_cap: u32) -> Self {
        debug_assert!(Arc::ptr_eq(deck_a.catalog(), deck_b.catalog()), "decks come from different catalogs");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pile_a = deck_a.cards().to_vec();
        let mut pile_b = deck_b.cards().to_vec();
        pile_a.shuffle(&mut rng);
        pile_b.shuffle(&mut rng);

        let mut sides = [HeroSide::new(deck_a.hero_class, pile_a), HeroSide::new(deck_b.hero_class, pile_b)];
        for _ in 0..FIRST_PLAYER_HAND {
            sides[0].draw();
        }
        for _ in 0..SECOND_PLAYER_HAND {
            sides[1].draw();
        }
        sides[0].begin_turn();

        GameState {
            sides,
            active: 0,
            turn: 1,
            turn_cap: turn_cap.max(1),
            next_minion_id: 0,
            rng,
            catalog: deck_a.catalog().clone(),
        }
    }

    pub fn side(&self, index: usize) -> &HeroSide {
        &self.sides[index]
    }

    /// Index of the player to move.
    pub fn active_index(&self) -> usize {
        self.active
    }

    pub fn active_side(&self) -> &HeroSide {
        &self.sides[self.active]
    }

    pub fn opponent_side(&self) -> &HeroSide {
        &self.sides[1 - self.active]
    }

    /// Half-turn counter, starting at 1.
    pub fn turn_number(&self) -> u32 {
        self.turn
    }

    pub fn turn_cap(&self) -> u32 {
        self.turn_cap
    }

    pub fn catalog(&self) -> &Arc<CardCatalog> {
        &self.catalog
    }

    pub fn card(&self, id: CardId) -> &CardSpec {
        self.catalog.get(id)
    }

    /// Mutable access for building test positions. Callers are responsible
    /// for keeping the state consistent.
    pub fn side_mut(&mut self, index: usize) -> &mut HeroSide {
        &mut self.sides[index]
    }

    /// Places a minion from `card` on `side`'s board, ready to attack.
    /// Intended for constructing positions; returns the instance id.
    pub fn spawn_minion(&mut self, side: usize, card: CardId) -> u32 {
        let id = self.next_minion_id;
        self.next_minion_id += 1;
        let spec = self.catalog.get(card).clone();
        let mut m = MinionInstance::from_card(id, card, &spec);
        m.entered_this_turn = false;
        m.attacks_remaining = m.attacks_per_turn();
        self.sides[side].battlefield.push(m);
        id
    }

    /// Copy of the state whose PRNG runs on a separate stream, so
    /// simulating on it never reveals or consumes the live stream.
    pub fn forked(&self) -> GameState {
        let mut copy = self.clone();
        let stream = copy.rng.get_stream().wrapping_add(FORK_STREAM);
        copy.rng.set_stream(stream);
        copy
    }

    /// Stable 64-bit hash of the canonical state serialization, PRNG
    /// position included.
    pub fn state_hash(&self) -> u64 {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(self).expect("game state serializes"));
        hasher.update(self.rng.get_seed());
        hasher.update(self.rng.get_stream().to_le_bytes());
        hasher.update(self.rng.get_word_pos().to_le_bytes());
        let digest = hasher.finalize();
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(&digest[..8]);
        u64::from_le_bytes(bytes)
    }

    pub(crate) fn alloc_minion_id(&mut self) -> u32 {
        let id = self.next_minion_id;
        self.next_minion_id += 1;
        id
    }
}

impl PartialEq for GameState {
    fn eq(&self, other: &Self) -> bool {
        self.sides == other.sides
            && self.active == other.active
            && self.turn == other.turn
            && self.turn_cap == other.turn_cap
            && self.next_minion_id == other.next_minion_id
            && self.rng == other.rng
    }
}
