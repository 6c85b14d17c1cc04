//! Card catalog and deck data model.
//!
//! A catalog is a JSON array of card records; a deck is a text file with one
//! card name per line. Both are immutable once loaded and are shared between
//! match workers through [`Arc`].

mod effect;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use effect::{parse_script, RawEffect, ScriptError};
pub use effect::{Effect, Secret, TargetRule};

pub const DECK_SIZE: usize = 30;
pub const MAX_COPIES: usize = 2;
pub const MAX_LEGENDARY_COPIES: usize = 1;

#[derive(Debug, Error)]
pub enum CardError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("card `{card}`: {source}")]
    UnknownEffect { card: String, source: UnknownScript },
    #[error("duplicate card name `{0}`")]
    DuplicateName(String),
    #[error("unknown card `{0}`")]
    UnknownCard(String),
    #[error("deck has {0} cards, expected {DECK_SIZE}")]
    DeckSize(usize),
    #[error("deck holds {count} copies of `{card}`, limit is {limit}")]
    CopyLimit { card: String, count: usize, limit: usize },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Error)]
#[error("effect script `{0}` is not implemented")]
pub struct UnknownScript(pub String);

/// Index of a card inside its catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CardId(pub u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CardKind {
    Minion,
    Spell,
    Weapon,
}

/// The nine minion abilities the agent's value function weighs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AbilityFlag {
    Charge,
    Deathrattle,
    DivineShield,
    Inspire,
    LifeSteal,
    Stealth,
    Taunt,
    Windfury,
    Poison,
}

impl AbilityFlag {
    pub const ALL: [AbilityFlag; 9] = [
        AbilityFlag::Charge,
        AbilityFlag::Deathrattle,
        AbilityFlag::DivineShield,
        AbilityFlag::Inspire,
        AbilityFlag::LifeSteal,
        AbilityFlag::Stealth,
        AbilityFlag::Taunt,
        AbilityFlag::Windfury,
        AbilityFlag::Poison,
    ];

    fn bit(self) -> u16 {
        1 << (self as u16)
    }
}

/// Bit set of [`AbilityFlag`]s.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<AbilityFlag>", into = "Vec<AbilityFlag>")]
pub struct AbilitySet(u16);

impl AbilitySet {
    pub fn empty() -> Self {
        AbilitySet(0)
    }

    pub fn contains(self, flag: AbilityFlag) -> bool {
        self.0 & flag.bit() != 0
    }

    pub fn insert(&mut self, flag: AbilityFlag) {
        self.0 |= flag.bit();
    }

    pub fn remove(&mut self, flag: AbilityFlag) {
        self.0 &= !flag.bit();
    }

    pub fn with(mut self, flag: AbilityFlag) -> Self {
        self.insert(flag);
        self
    }

    pub fn iter(self) -> impl Iterator<Item = AbilityFlag> {
        AbilityFlag::ALL.into_iter().filter(move |f| self.contains(*f))
    }
}

impl From<Vec<AbilityFlag>> for AbilitySet {
    fn from(flags: Vec<AbilityFlag>) -> Self {
        flags.into_iter().fold(AbilitySet::empty(), AbilitySet::with)
    }
}

impl From<AbilitySet> for Vec<AbilityFlag> {
    fn from(set: AbilitySet) -> Self {
        set.iter().collect()
    }
}

impl FromIterator<AbilityFlag> for AbilitySet {
    fn from_iter<I: IntoIterator<Item = AbilityFlag>>(iter: I) -> Self {
        iter.into_iter().fold(AbilitySet::empty(), AbilitySet::with)
    }
}

/// Card rarity, 1 (Common) through 4 (Legendary).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rarity(u8);

impl Rarity {
    pub const COMMON: Rarity = Rarity(1);
    pub const RARE: Rarity = Rarity(2);
    pub const EPIC: Rarity = Rarity(3);
    pub const LEGENDARY: Rarity = Rarity(4);

    pub fn new(value: u8) -> Option<Self> {
        (1..=4).contains(&value).then_some(Rarity(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_legendary(self) -> bool {
        self == Rarity::LEGENDARY
    }
}

/// On-disk card record. Field names are the catalog file's schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct CardRecord {
    pub name: String,
    pub kind: CardKind,
    pub mana_cost: u8,
    #[serde(default)]
    pub attack: u8,
    #[serde(default)]
    pub health: u8,
    #[serde(default)]
    pub durability: u8,
    #[serde(default)]
    pub abilities: Vec<AbilityFlag>,
    pub rarity: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effect: Option<String>,
}

/// A validated card definition with its effect script compiled.
#[derive(Debug, Clone, PartialEq)]
pub struct CardSpec {
    pub name: String,
    pub kind: CardKind,
    pub mana_cost: u8,
    pub attack: u8,
    pub health: u8,
    pub durability: u8,
    pub abilities: AbilitySet,
    pub rarity: Rarity,
    pub effect: Option<Effect>,
}

impl CardSpec {
    /// True when the effect fires on death or hero power instead of on play.
    pub fn has_triggered_effect(&self) -> bool {
        self.kind == CardKind::Minion
            && (self.abilities.contains(AbilityFlag::Deathrattle) || self.abilities.contains(AbilityFlag::Inspire))
    }

    /// Effect that resolves when the card is played, with its chosen-target rule if any.
    pub fn play_effect(&self) -> Option<&Effect> {
        if self.has_triggered_effect() {
            None
        } else {
            self.effect.as_ref()
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CardCatalog {
    cards: Vec<CardSpec>,
    by_name: HashMap<String, CardId>,
}

impl CardCatalog {
    pub fn from_json_str(text: &str) -> Result<Self, CardError> {
        let records: Vec<CardRecord> = serde_json::from_str(text).map_err(|e| CardError::Parse(e.to_string()))?;
        Self::from_records(records)
    }

    pub fn from_records(records: Vec<CardRecord>) -> Result<Self, CardError> {
        if records.len() > u16::MAX as usize {
            return Err(CardError::Parse("catalog too large".into()));
        }
        let mut by_name = HashMap::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if by_name.insert(r.name.clone(), CardId(i as u16)).is_some() {
                return Err(CardError::DuplicateName(r.name.clone()));
            }
        }

        let mut cards = Vec::with_capacity(records.len());
        for r in &records {
            validate_record(r)?;
            let effect = match &r.effect {
                None => None,
                Some(script) => Some(compile_effect(r, script, &records, &by_name)?),
            };
            cards.push(CardSpec {
                name: r.name.clone(),
                kind: r.kind,
                mana_cost: r.mana_cost,
                attack: r.attack,
                health: r.health,
                durability: r.durability,
                abilities: r.abilities.iter().copied().collect(),
                rarity: Rarity(r.rarity),
                effect,
            });
        }
        Ok(CardCatalog { cards, by_name })
    }

    pub fn len(&self) -> usize {
        self.cards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cards.is_empty()
    }

    pub fn get(&self, id: CardId) -> &CardSpec {
        &self.cards[id.0 as usize]
    }

    pub fn id_of(&self, name: &str) -> Option<CardId> {
        self.by_name.get(name).copied()
    }

    pub fn by_name(&self, name: &str) -> Option<&CardSpec> {
        self.id_of(name).map(|id| self.get(id))
    }

    pub fn iter(&self) -> impl Iterator<Item = (CardId, &CardSpec)> {
        self.cards.iter().enumerate().map(|(i, c)| (CardId(i as u16), c))
    }
}

fn validate_record(r: &CardRecord) -> Result<(), CardError> {
    let bad = |msg: &str| Err(CardError::Parse(format!("card `{}`: {msg}", r.name)));
    if r.name.trim().is_empty() || r.name.trim() != r.name {
        return bad("name must be non-empty without surrounding whitespace");
    }
    if Rarity::new(r.rarity).is_none() {
        return bad("rarity must be in 1..=4");
    }
    match r.kind {
        CardKind::Minion => {
            if r.health == 0 {
                return bad("minion health must be at least 1");
            }
            if r.durability != 0 {
                return bad("minions have no durability");
            }
        }
        CardKind::Spell => {
            if r.attack != 0 || r.health != 0 || r.durability != 0 {
                return bad("spells carry no attack, health or durability");
            }
            if !r.abilities.is_empty() {
                return bad("spells carry no abilities");
            }
        }
        CardKind::Weapon => {
            if r.durability == 0 {
                return bad("weapon durability must be at least 1");
            }
            if r.health != 0 {
                return bad("weapons have no health");
            }
            if !r.abilities.is_empty() {
                return bad("weapons carry no abilities");
            }
        }
    }
    Ok(())
}

fn compile_effect(
    r: &CardRecord,
    script: &str,
    records: &[CardRecord],
    by_name: &HashMap<String, CardId>,
) -> Result<Effect, CardError> {
    let raw = parse_script(script).map_err(|e| match e {
        ScriptError::Unknown(name) => CardError::UnknownEffect { card: r.name.clone(), source: UnknownScript(name) },
        ScriptError::Malformed(_) => CardError::Parse(format!("card `{}`: {e}", r.name)),
    })?;
    let bad = |msg: String| CardError::Parse(format!("card `{}`: {msg}", r.name));
    let lookup = |name: &str, kind: CardKind| -> Result<CardId, CardError> {
        let id = *by_name.get(name).ok_or_else(|| bad(format!("effect references unknown card `{name}`")))?;
        if records[id.0 as usize].kind != kind {
            return Err(bad(format!("effect target `{name}` is not a {kind:?}")));
        }
        Ok(id)
    };

    let effect = match raw {
        RawEffect::DealDamage(amount, target) => Effect::DealDamage { amount, target },
        RawEffect::Heal(amount) => Effect::Heal { amount },
        RawEffect::Draw(count) => Effect::Draw { count },
        RawEffect::GainArmor(amount) => Effect::GainArmor { amount },
        RawEffect::Summon(name) => Effect::Summon { card: lookup(&name, CardKind::Minion)? },
        RawEffect::Equip(name) => Effect::Equip { card: lookup(&name, CardKind::Weapon)? },
        RawEffect::Secret(s) => {
            if r.kind != CardKind::Spell {
                return Err(bad("only spells can be secrets".into()));
            }
            Effect::Secret(s)
        }
    };

    let triggered = r.kind == CardKind::Minion
        && (r.abilities.contains(&AbilityFlag::Deathrattle) || r.abilities.contains(&AbilityFlag::Inspire));
    if (triggered || r.kind == CardKind::Weapon) && effect.chosen_target().is_some() {
        return Err(bad("triggered and weapon effects cannot take a chosen target".into()));
    }
    Ok(effect)
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<CardCatalog, CardError> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|source| CardError::Io { path: path.display().to_string(), source })?;
    CardCatalog::from_json_str(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HeroClass {
    Warrior,
    Shaman,
    Mage,
}

impl HeroClass {
    pub const ALL: [HeroClass; 3] = [HeroClass::Warrior, HeroClass::Shaman, HeroClass::Mage];

    pub fn parse(text: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.to_string().eq_ignore_ascii_case(text.trim()))
    }
}

impl fmt::Display for HeroClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HeroClass::Warrior => "Warrior",
            HeroClass::Shaman => "Shaman",
            HeroClass::Mage => "Mage",
        };
        f.write_str(s)
    }
}

/// A validated 30-card deck. Card order is the file order; shuffling
/// happens when a game starts.
#[derive(Debug, Clone)]
pub struct Deck {
    pub name: String,
    pub hero_class: HeroClass,
    cards: Vec<CardId>,
    catalog: Arc<CardCatalog>,
}

impl Deck {
    pub fn new(
        name: impl Into<String>,
        hero_class: HeroClass,
        cards: Vec<CardId>,
        catalog: Arc<CardCatalog>,
    ) -> Result<Self, CardError> {
        if cards.len() != DECK_SIZE {
            return Err(CardError::DeckSize(cards.len()));
        }
        let mut counts: HashMap<CardId, usize> = HashMap::new();
        for &id in &cards {
            *counts.entry(id).or_default() += 1;
        }
        // Report violations in deck order so errors are stable.
        for &id in &cards {
            let spec = catalog.get(id);
            let limit = if spec.rarity.is_legendary() { MAX_LEGENDARY_COPIES } else { MAX_COPIES };
            if counts[&id] > limit {
                return Err(CardError::CopyLimit { card: spec.name.clone(), count: counts[&id], limit });
            }
        }
        Ok(Deck { name: name.into(), hero_class, cards, catalog })
    }

    /// Parses deck text. Lines starting with `#` are comments, except
    /// `# class: <Warrior|Shaman|Mage>`, which sets the hero class; without
    /// it the class is inferred from the deck name.
    pub fn parse(name: &str, text: &str, catalog: Arc<CardCatalog>) -> Result<Self, CardError> {
        let mut hero_class = None;
        let mut cards = Vec::with_capacity(DECK_SIZE);
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(value) = comment.trim().strip_prefix("class:") {
                    hero_class = Some(
                        HeroClass::parse(value)
                            .ok_or_else(|| CardError::Parse(format!("unknown hero class `{}`", value.trim())))?,
                    );
                }
                continue;
            }
            let id = catalog.id_of(line).ok_or_else(|| CardError::UnknownCard(line.to_string()))?;
            cards.push(id);
        }
        let hero_class = match hero_class {
            Some(c) => c,
            None => {
                let lower = name.to_ascii_lowercase();
                HeroClass::ALL.into_iter().find(|c| lower.contains(&c.to_string().to_ascii_lowercase())).ok_or_else(
                    || CardError::Parse(format!("deck `{name}` has no `# class:` line and no class in its name")),
                )?
            }
        };
        Deck::new(name, hero_class, cards, catalog)
    }

    pub fn cards(&self) -> &[CardId] {
        &self.cards
    }

    pub fn catalog(&self) -> &Arc<CardCatalog> {
        &self.catalog
    }

    pub fn specs(&self) -> impl Iterator<Item = &CardSpec> {
        self.cards.iter().map(|&id| self.catalog.get(id))
    }
}

pub fn load_deck(path: impl AsRef<Path>, catalog: Arc<CardCatalog>) -> Result<Deck, CardError> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|source| CardError::Io { path: path.display().to_string(), source })?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string());
    Deck::parse(&name, &text, catalog)
}

/// Deck file text accepted by [`Deck::parse`].
pub fn serialize_deck(deck: &Deck) -> String {
    let mut out = format!("# class: {}\n", deck.hero_class);
    for spec in deck.specs() {
        out.push_str(&spec.name);
        out.push('\n');
    }
    out
}
