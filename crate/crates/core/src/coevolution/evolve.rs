use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::seed;

use super::genome::{init_population, mutate, Genome, GenomeId};
use super::ledger::FitnessLedger;
use super::tournament::run_round_robin;
use super::{EvolutionConfig, EvolutionError};

/// Stream tag for the variation RNG, kept apart from match seeds.
const VARIATION_TAG: u64 = u64::MAX;

/// A genome together with the fitness it earned in one evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredGenome {
    #[serde(flatten)]
    pub genome: Genome,
    pub fitness: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenerationStats {
    pub generation: u32,
    pub min: u64,
    pub median: f64,
    pub max: u64,
    pub mean_age: f64,
    /// Offspring that survived selection.
    pub entrants: usize,
    /// Largest fitness attainable in the evaluated pool.
    pub max_possible: u64,
}

impl GenerationStats {
    fn from_survivors(generation: u32, survivors: &[ScoredGenome], entrants: usize, max_possible: u64) -> Self {
        let mut fitness: Vec<u64> = survivors.iter().map(|s| s.fitness).collect();
        fitness.sort_unstable();
        let n = fitness.len();
        let median = if n == 0 {
            0.0
        } else if n % 2 == 1 {
            fitness[n / 2] as f64
        } else {
            (fitness[n / 2 - 1] + fitness[n / 2]) as f64 / 2.0
        };
        let mean_age =
            survivors.iter().map(|s| f64::from(generation - s.genome.birth_generation)).sum::<f64>() / n.max(1) as f64;
        GenerationStats {
            generation,
            min: fitness.first().copied().unwrap_or(0),
            median,
            max: fitness.last().copied().unwrap_or(0),
            mean_age,
            entrants,
            max_possible,
        }
    }

    /// Fitness divided by the pool's maximum; comparable across pool sizes.
    pub fn share(&self, fitness: f64) -> f64 {
        if self.max_possible == 0 {
            0.0
        } else {
            fitness / self.max_possible as f64
        }
    }

    pub fn median_share(&self) -> f64 {
        self.share(self.median)
    }

    pub fn max_share(&self) -> f64 {
        self.share(self.max as f64)
    }
}

/// Everything one generation produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub stats: GenerationStats,
    /// Survivors, best first.
    pub population: Vec<ScoredGenome>,
    pub ledger: FitnessLedger,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunArtifact {
    pub master_seed: u64,
    /// Generation 0 (the evaluated initial population) first.
    pub generations: Vec<GenerationRecord>,
}

impl RunArtifact {
    pub fn final_population(&self) -> &[ScoredGenome] {
        self.generations.last().map(|g| g.population.as_slice()).unwrap_or(&[])
    }

    pub fn best(&self) -> Option<&ScoredGenome> {
        self.final_population().first()
    }

    pub fn stats(&self) -> impl Iterator<Item = &GenerationStats> {
        self.generations.iter().map(|g| &g.stats)
    }
}

/// Plays the round robin among `pool` and tallies victories.
pub fn evaluate(pool: &[Genome], cfg: &EvolutionConfig, round: u64) -> Result<FitnessLedger, EvolutionError> {
    let agents: Vec<_> = pool.iter().map(|g| (g.id, g.weight_vector())).collect();
    let records = run_round_robin(&agents, &cfg.decks, cfg.games_per_pairing, cfg.master_seed, round, cfg.turn_cap)?;
    Ok(FitnessLedger::from_records(
        pool.iter().map(|g| g.id).collect(),
        cfg.decks.len(),
        cfg.games_per_pairing,
        &records,
    ))
}

/// Keeps the `keep` fittest of `pool`, ties going to the lower id.
fn select(pool: Vec<Genome>, ledger: &FitnessLedger, keep: usize) -> Vec<ScoredGenome> {
    let mut scored: Vec<ScoredGenome> =
        pool.into_iter().enumerate().map(|(pos, genome)| ScoredGenome { genome, fitness: ledger.total(pos) }).collect();
    scored.sort_by(|a, b| b.fitness.cmp(&a.fitness).then(a.genome.id.cmp(&b.genome.id)));
    scored.truncate(keep);
    scored
}

/// One (μ+λ) step: λ offspring from uniformly chosen parents, the whole
/// pool re-evaluated, the best μ kept. `next_id` supplies fresh ids.
pub fn step_generation<R: Rng + ?Sized>(
    population: &[Genome],
    cfg: &EvolutionConfig,
    generation: u32,
    next_id: &mut GenomeId,
    rng: &mut R,
) -> Result<GenerationRecord, EvolutionError> {
    if population.is_empty() {
        return Err(EvolutionError::Config("empty population".into()));
    }
    let mut pool = population.to_vec();
    for _ in 0..cfg.lambda {
        let parent = &population[rng.random_range(0..population.len())];
        pool.push(mutate(parent, cfg.sigma_rule, *next_id, generation, rng));
        *next_id += 1;
    }
    let ledger = evaluate(&pool, cfg, u64::from(generation))?;
    let survivors = select(pool, &ledger, cfg.mu);
    let entrants = survivors.iter().filter(|s| s.genome.birth_generation == generation).count();
    let stats = GenerationStats::from_survivors(generation, &survivors, entrants, ledger.max_possible());
    Ok(GenerationRecord { stats, population: survivors, ledger })
}

pub type ObserverError = Box<dyn std::error::Error + Send + Sync>;

/// Runs one evolution to completion.
pub fn evolve(cfg: &EvolutionConfig) -> Result<RunArtifact, EvolutionError> {
    evolve_with(cfg, |_| Ok(()))
}

/// Like [`evolve`], handing each finished generation to `observer`
/// before the next one starts. An observer error stops the run.
pub fn evolve_with<F>(cfg: &EvolutionConfig, mut observer: F) -> Result<RunArtifact, EvolutionError>
where
    F: FnMut(&GenerationRecord) -> Result<(), ObserverError>,
{
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(cfg.master_seed, &[VARIATION_TAG]));
    let initial = init_population(cfg, &mut rng);
    let mut next_id = initial.len() as GenomeId;

    let ledger = evaluate(&initial, cfg, 0)?;
    let population = select(initial, &ledger, cfg.mu);
    let stats = GenerationStats::from_survivors(0, &population, 0, ledger.max_possible());
    let first = GenerationRecord { stats, population, ledger };
    observer(&first).map_err(EvolutionError::Observer)?;
    let mut generations = vec![first];

    for generation in 1..=cfg.generations {
        let parents: Vec<Genome> =
            generations.last().expect("generation 0 exists").population.iter().map(|s| s.genome.clone()).collect();
        let record = step_generation(&parents, cfg, generation, &mut next_id, &mut rng)?;
        observer(&record).map_err(EvolutionError::Observer)?;
        generations.push(record);
    }

    Ok(RunArtifact { master_seed: cfg.master_seed, generations })
}
