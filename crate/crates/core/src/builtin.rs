//! The shipped card pool and its three archetype decks.

use std::sync::Arc;

use crate::cards::{CardCatalog, CardError, Deck};

pub const CATALOG_JSON: &str = include_str!("../data/catalog.json");

/// `(name, deck text)` for the aggro, midrange and control archetypes.
pub const DECKS: [(&str, &str); 3] = [
    ("aggro_warrior", include_str!("../data/decks/aggro_warrior.txt")),
    ("midrange_shaman", include_str!("../data/decks/midrange_shaman.txt")),
    ("control_mage", include_str!("../data/decks/control_mage.txt")),
];

pub fn catalog() -> Arc<CardCatalog> {
    Arc::new(CardCatalog::from_json_str(CATALOG_JSON).expect("shipped catalog is valid"))
}

pub fn decks(catalog: &Arc<CardCatalog>) -> Result<Vec<Deck>, CardError> {
    DECKS.iter().map(|(name, text)| Deck::parse(name, text, catalog.clone())).collect()
}

/// Shipped catalog and decks in one call.
pub fn standard_decks() -> Vec<Deck> {
    decks(&catalog()).expect("shipped decks are valid")
}
