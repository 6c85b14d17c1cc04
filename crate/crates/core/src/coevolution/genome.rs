use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::agent::{WeightVector, WEIGHT_COUNT};

use super::EvolutionConfig;

pub const GENE_COUNT: usize = WEIGHT_COUNT;
/// Lower bound on every mutation amplitude.
pub const SIGMA_FLOOR: f64 = 1e-5;

pub type GenomeId = u64;

/// How mutation amplitudes self-adapt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaRule {
    /// `σ' = max(σ + exp(τ·Nᵢ + τ'·N), ε)`.
    #[default]
    Additive,
    /// Log-normal: `σ' = max(σ · exp(τ·Nᵢ + τ'·N), ε)`.
    LogNormal,
}

/// Local learning rate `1 / √(2√n)`.
pub fn tau_local(n: usize) -> f64 {
    1.0 / (2.0 * (n as f64).sqrt()).sqrt()
}

/// Global learning rate `1 / √(2n)`.
pub fn tau_global(n: usize) -> f64 {
    1.0 / (2.0 * n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Genome {
    pub id: GenomeId,
    pub birth_generation: u32,
    pub weights: [f64; GENE_COUNT],
    pub sigmas: [f64; GENE_COUNT],
}

impl Genome {
    pub fn weight_vector(&self) -> WeightVector {
        WeightVector::new(self.weights).expect("genome weights stay in [0, 1]")
    }

    pub fn is_valid(&self) -> bool {
        self.weights.iter().all(|w| (0.0..=1.0).contains(w)) && self.sigmas.iter().all(|s| *s >= SIGMA_FLOOR)
    }

    pub fn from_weights(id: GenomeId, weights: WeightVector, sigma: f64) -> Self {
        Genome { id, birth_generation: 0, weights: *weights.as_array(), sigmas: [sigma.max(SIGMA_FLOOR); GENE_COUNT] }
    }
}

/// μ genomes with uniform weights and every σ at the configured initial value.
pub fn init_population<R: Rng + ?Sized>(cfg: &EvolutionConfig, rng: &mut R) -> Vec<Genome> {
    (0..cfg.mu as GenomeId)
        .map(|id| Genome {
            id,
            birth_generation: 0,
            weights: std::array::from_fn(|_| rng.random::<f64>()),
            sigmas: [cfg.initial_sigma.max(SIGMA_FLOOR); GENE_COUNT],
        })
        .collect()
}

/// Self-adaptive Gaussian mutation. Draw order: the shared global sample,
/// then one sample per amplitude, then one per weight.
pub fn mutate<R: Rng + ?Sized>(parent: &Genome, rule: SigmaRule, id: GenomeId, generation: u32, rng: &mut R) -> Genome {
    let tau = tau_local(GENE_COUNT);
    let tau_prime = tau_global(GENE_COUNT);
    let global: f64 = rng.sample(StandardNormal);

    let mut sigmas = [0.0; GENE_COUNT];
    for (out, &sigma) in sigmas.iter_mut().zip(parent.sigmas.iter()) {
        let local: f64 = rng.sample(StandardNormal);
        let factor = (tau * local + tau_prime * global).exp();
        let updated = match rule {
            SigmaRule::Additive => sigma + factor,
            SigmaRule::LogNormal => sigma * factor,
        };
        // NaN/inf cannot arise from finite inputs, but a huge σ must not
        // poison the weights either.
        *out = if updated.is_finite() { updated.max(SIGMA_FLOOR) } else { f64::MAX };
    }

    let mut weights = [0.0; GENE_COUNT];
    for ((out, &w), &sigma) in weights.iter_mut().zip(parent.weights.iter()).zip(sigmas.iter()) {
        let noise: f64 = rng.sample(StandardNormal);
        let moved = w + sigma * noise;
        *out = if moved.is_nan() { w } else { moved.clamp(0.0, 1.0) };
    }

    Genome { id, birth_generation: generation, weights, sigmas }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn learning_rates_for_21_genes() {
        let oracle_local = 1.0 / (2.0 * 21f64.powf(0.5)).powf(0.5);
        assert!((tau_local(21) - oracle_local).abs() < 1e-15);
        assert!((tau_local(21) - 0.330_316).abs() < 1e-6);
        assert!((tau_global(21) - 0.154_303).abs() < 1e-6);
        assert!((tau_global(21) - 42f64.sqrt().recip()).abs() < 1e-15);
    }

    #[test]
    fn sigma_floor_binds_exactly() {
        let parent =
            Genome { id: 0, birth_generation: 0, weights: [0.5; GENE_COUNT], sigmas: [SIGMA_FLOOR; GENE_COUNT] };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut saw_floor = false;
        for _ in 0..200 {
            let child = mutate(&parent, SigmaRule::LogNormal, 1, 1, &mut rng);
            for &s in &child.sigmas {
                assert!(s >= SIGMA_FLOOR);
                saw_floor |= s == SIGMA_FLOOR;
            }
        }
        assert!(saw_floor, "a shrinking update should hit the floor exactly");
    }

    #[test]
    fn additive_rule_only_grows_sigma() {
        let parent = Genome::from_weights(0, WeightVector::new([0.5; 21]).unwrap(), 0.15);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let child = mutate(&parent, SigmaRule::Additive, 1, 1, &mut rng);
        assert!(child.sigmas.iter().all(|&s| s > 0.15));
    }

    #[test]
    fn weights_clamp_at_bounds() {
        let parent = Genome { id: 0, birth_generation: 0, weights: [1.0; GENE_COUNT], sigmas: [5.0; GENE_COUNT] };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let child = mutate(&parent, SigmaRule::LogNormal, 7, 3, &mut rng);
        assert!(child.weights.contains(&1.0), "positive draws clamp to 1");
        assert!(child.is_valid());
        assert_eq!((child.id, child.birth_generation), (7, 3));
    }

    #[test]
    fn init_is_seeded_and_uniform() {
        let mut cfg = EvolutionConfig::new(crate::builtin::standard_decks());
        cfg.mu = 10;
        let a = init_population(&cfg, &mut ChaCha8Rng::seed_from_u64(1));
        let b = init_population(&cfg, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
        assert!(a.iter().all(|g| g.is_valid() && g.birth_generation == 0));
        let mean: f64 = a.iter().flat_map(|g| g.weights).sum::<f64>() / 210.0;
        assert!((0.35..=0.65).contains(&mean), "mean {mean}");
        assert!(a.iter().all(|g| g.sigmas == [0.15; GENE_COUNT]));
    }
}
