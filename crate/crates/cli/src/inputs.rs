//! Loading catalogs, decks and weight files; shared output helpers.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, Context};
use coevo::agent::WEIGHT_COUNT;
use coevo::builtin;
use coevo::cards::{serialize_deck, CardCatalog, Deck};
use coevo::coevolution::{Genome, ScoredGenome};
use coevo::WeightVector;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bad input (exit 2) or failure while working (exit 3).
pub enum Failure {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub trait Classify<T> {
    fn config(self) -> Outcome<T>;
    fn runtime(self) -> Outcome<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn config(self) -> Outcome<T> {
        self.map_err(|e| Failure::Config(e.into()))
    }
    fn runtime(self) -> Outcome<T> {
        self.map_err(|e| Failure::Runtime(e.into()))
    }
}

pub fn config_error<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Config(anyhow!(msg.into())))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub struct CatalogSource {
    pub catalog: Arc<CardCatalog>,
    pub sha256: String,
}

pub fn load_catalog(path: Option<&Path>) -> Outcome<CatalogSource> {
    let text = match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading catalog {}", p.display())).config()?,
        None => builtin::CATALOG_JSON.to_string(),
    };
    let catalog = CardCatalog::from_json_str(&text).context("parsing catalog").config()?;
    Ok(CatalogSource { catalog: Arc::new(catalog), sha256: sha256_hex(text.as_bytes()) })
}

/// Deck files in the given order, or the three shipped decks.
pub fn load_decks(paths: &[PathBuf], catalog: &Arc<CardCatalog>) -> Outcome<Vec<Deck>> {
    if paths.is_empty() {
        return builtin::decks(catalog).context("loading shipped decks").config();
    }
    paths
        .iter()
        .map(|p| coevo::load_deck(p, catalog.clone()).with_context(|| format!("loading deck {}", p.display())).config())
        .collect()
}

#[derive(Debug, Serialize)]
pub struct DeckInfo {
    pub name: String,
    pub class: String,
    pub sha256: String,
}

pub fn deck_info(decks: &[Deck]) -> Vec<DeckInfo> {
    decks
        .iter()
        .map(|d| DeckInfo {
            name: d.name.clone(),
            class: d.hero_class.to_string(),
            sha256: sha256_hex(serialize_deck(d).as_bytes()),
        })
        .collect()
}

/// `{"weights": [...], "sigmas": [...]}`; sigmas are optional on input.
#[derive(Debug, Serialize, Deserialize)]
pub struct WeightsFile {
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigmas: Option<Vec<f64>>,
}

impl WeightsFile {
    pub fn from_genome(g: &Genome) -> Self {
        WeightsFile { weights: g.weights.to_vec(), sigmas: Some(g.sigmas.to_vec()) }
    }
}

/// One agent read from a weights file or a population snapshot.
#[derive(Debug, Clone)]
pub struct Agent {
    pub label: String,
    pub weights: WeightVector,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AgentSource {
    Single(WeightsFile),
    Snapshot(Vec<ScoredGenome>),
}

/// Reads agents from each file in order. Snapshots contribute every
/// genome they hold, labelled `<path without extension>#<id>`.
pub fn load_agents(paths: &[PathBuf]) -> Outcome<Vec<Agent>> {
    let mut agents = Vec::new();
    for p in paths {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).config()?;
        let source: AgentSource = serde_json::from_str(&text)
            .with_context(|| format!("{} is neither a weights file nor a snapshot", p.display()))
            .config()?;
        let stem = p.with_extension("").display().to_string();
        match source {
            AgentSource::Single(w) => {
                if w.weights.len() != WEIGHT_COUNT {
                    return config_error(format!(
                        "{}: expected {WEIGHT_COUNT} weights, found {}",
                        p.display(),
                        w.weights.len()
                    ));
                }
                let weights = WeightVector::from_slice(&w.weights).with_context(|| p.display().to_string()).config()?;
                agents.push(Agent { label: stem, weights });
            }
            AgentSource::Snapshot(genomes) => {
                for g in genomes {
                    let weights = WeightVector::new(g.genome.weights)
                        .with_context(|| format!("{} genome {}", p.display(), g.genome.id))
                        .config()?;
                    agents.push(Agent { label: format!("{stem}#{}", g.genome.id), weights });
                }
            }
        }
    }
    Ok(agents)
}

pub fn create_dir(path: &Path) -> Outcome {
    fs::create_dir_all(path).with_context(|| format!("creating {}", path.display())).runtime()
}

pub fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Outcome {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display())).runtime()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Outcome {
    let mut text = serde_json::to_string_pretty(value).runtime()?;
    text.push('\n');
    write_file(path, text)
}

/// Rayon pool with `workers` threads; 0 means one per core.
pub fn worker_pool(workers: usize) -> Outcome<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().context("starting worker pool").runtime()
}
