#![allow(clippy::needless_range_loop)]

mod common;

use coevo::coevolution::{
    evaluate, evolve, evolve_with, init_population, mutate, run_round_robin, schedule_len, step_generation,
    EvolutionConfig, FitnessLedger, GenerationRecord, Genome, RunArtifact, SigmaRule, GENE_COUNT, SIGMA_FLOOR,
};
use coevo::engine::{play_match, Outcome};
use coevo::{greedy_policy, WeightVector};
use common::decks;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn desk_config(seed: u64) -> EvolutionConfig {
    let mut cfg = EvolutionConfig::new(decks()[..2].to_vec());
    cfg.mu = 4;
    cfg.lambda = 4;
    cfg.games_per_pairing = 2;
    cfg.generations = 4;
    cfg.master_seed = seed;
    cfg
}

fn check_ledger(ledger: &FitnessLedger) {
    let n = ledger.len();
    let d = ledger.decks;
    let g = ledger.games_per_pairing;
    let fitness = ledger.fitness();
    for i in 0..n {
        let mut sum = 0u64;
        for j in 0..n {
            for di in 0..d {
                for dj in 0..d {
                    let w = ledger.wins(i, j, di, dj);
                    assert!(w <= g);
                    if i == j {
                        assert_eq!(w, 0);
                    } else {
                        let back = ledger.wins(j, i, dj, di);
                        assert_eq!(w + back + ledger.draws(i, j, di, dj), g);
                    }
                    sum += u64::from(w);
                }
            }
        }
        assert_eq!(sum, fitness[i]);
        assert!(fitness[i] <= ledger.max_possible());
    }
    let total: u64 = fitness.iter().sum::<u64>() + ledger.total_draws();
    assert_eq!(total, ledger.total_games());
    assert_eq!(ledger.total_games(), schedule_len(n, d, g));
}

#[test]
fn ledger_conservation() {
    let cfg = desk_config(1);
    let pool = init_population(&EvolutionConfig { mu: 8, ..cfg.clone() }, &mut ChaCha8Rng::seed_from_u64(1));
    let ledger = evaluate(&pool, &cfg, 0).unwrap();
    assert_eq!(ledger.total_games(), 28 * 4 * 2);
    check_ledger(&ledger);
}

#[test]
fn single_game_has_one_victor() {
    let mut cfg = desk_config(2);
    cfg.decks.truncate(1);
    cfg.games_per_pairing = 1;
    let pool = init_population(&EvolutionConfig { mu: 2, ..cfg.clone() }, &mut ChaCha8Rng::seed_from_u64(2));
    let ledger = evaluate(&pool, &cfg, 0).unwrap();
    assert_eq!(ledger.total(0) + ledger.total(1) + ledger.total_draws(), 1);
}

#[test]
fn saturated_ledger_hits_the_bound() {
    let ledger = FitnessLedger::saturated((0..20).collect(), 3, 20);
    assert!(ledger.fitness().iter().all(|&f| f == 3420));
    assert_eq!(ledger.max_possible(), 3420);
    let gen0 = FitnessLedger::saturated((0..10).collect(), 3, 20);
    assert!(gen0.fitness().iter().all(|&f| f == 1620));
}

#[test]
fn runs_are_deterministic_and_thread_independent() {
    let cfg = desk_config(3);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = single.install(|| evolve(&cfg).unwrap());
    let b = many.install(|| evolve(&cfg).unwrap());
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let other = evolve(&desk_config(4)).unwrap();
    assert_ne!(a, other);
}

#[test]
fn zero_generations_evaluate_once() {
    let mut cfg = desk_config(5);
    cfg.generations = 0;
    let art = evolve(&cfg).unwrap();
    assert_eq!(art.generations.len(), 1);
    let initial = init_population(&cfg, &mut ChaCha8Rng::seed_from_u64(coevo::seed::derive(5, &[u64::MAX])));
    let mut ids: Vec<u64> = art.final_population().iter().map(|s| s.genome.id).collect();
    ids.sort_unstable();
    assert_eq!(ids, initial.iter().map(|g| g.id).collect::<Vec<_>>());
    assert_eq!(art.generations[0].stats.max_possible, 3 * 2 * 4);
}

fn check_run(cfg: &EvolutionConfig, art: &RunArtifact) {
    assert_eq!(art.generations.len(), cfg.generations as usize + 1);
    for (g, rec) in art.generations.iter().enumerate() {
        let st = &rec.stats;
        assert_eq!(st.generation as usize, g);
        assert!(st.entrants <= cfg.lambda);
        assert_eq!(rec.population.len(), cfg.mu);
        check_ledger(&rec.ledger);
        // Survivors are the top of the ledger, ties to the lower id.
        let mut ranked: Vec<(u64, u64)> =
            rec.ledger.ids.iter().zip(rec.ledger.fitness()).map(|(&id, f)| (id, f)).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let kept: Vec<(u64, u64)> = rec.population.iter().map(|s| (s.genome.id, s.fitness)).collect();
        assert_eq!(kept, ranked[..cfg.mu].to_vec());
        let ages: f64 =
            rec.population.iter().map(|s| f64::from(st.generation - s.genome.birth_generation)).sum::<f64>()
                / cfg.mu as f64;
        assert!((ages - st.mean_age).abs() < 1e-12);
        let entrants = rec.population.iter().filter(|s| g > 0 && s.genome.birth_generation as usize == g).count();
        assert_eq!(entrants, st.entrants);
        assert_eq!(st.max, rec.population[0].fitness);
        for s in &rec.population {
            assert!(s.genome.is_valid());
        }
    }
}

#[test]
fn run_bookkeeping() {
    for rule in [SigmaRule::Additive, SigmaRule::LogNormal] {
        let mut cfg = desk_config(6);
        cfg.sigma_rule = rule;
        let art = evolve(&cfg).unwrap();
        check_run(&cfg, &art);
    }
}

#[test]
fn observer_sees_every_generation_and_can_abort() {
    let cfg = desk_config(7);
    let mut seen = Vec::new();
    let art = evolve_with(&cfg, |r: &GenerationRecord| {
        seen.push(r.stats.generation);
        Ok(())
    })
    .unwrap();
    assert_eq!(seen, (0..=cfg.generations).collect::<Vec<_>>());
    assert_eq!(art, evolve(&cfg).unwrap());

    let err = evolve_with(
        &cfg,
        |r: &GenerationRecord| {
            if r.stats.generation == 2 {
                Err("disk full".into())
            } else {
                Ok(())
            }
        },
    )
    .unwrap_err();
    assert!(err.to_string().contains("disk full"));
}

#[test]
fn worse_offspring_leave_parents_in_place() {
    let cfg = desk_config(8);
    let parents: Vec<Genome> = evolve(&cfg).unwrap().final_population().iter().map(|s| s.genome.clone()).collect();
    let mut next_id = 1000;
    let rec = step_generation(&parents, &cfg, 5, &mut next_id, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
    let fitness = rec.ledger.fitness();
    let parent_min = fitness[..cfg.mu].iter().min().unwrap();
    let child_max = fitness[cfg.mu..].iter().max().unwrap();
    let mut kept: Vec<u64> = rec.population.iter().map(|s| s.genome.id).collect();
    kept.sort_unstable();
    let mut parent_ids: Vec<u64> = parents.iter().map(|g| g.id).collect();
    parent_ids.sort_unstable();
    if child_max < parent_min {
        assert_eq!(kept, parent_ids);
    }
    // Whatever was dropped scored no higher than anything kept.
    let kept_min = rec.population.iter().map(|s| s.fitness).min().unwrap();
    for (pos, id) in rec.ledger.ids.iter().enumerate() {
        if !kept.contains(id) {
            assert!(fitness[pos] <= kept_min);
        }
    }
    assert_eq!(next_id, 1000 + cfg.lambda as u64);
    assert!(rec.ledger.ids[cfg.mu..].iter().all(|&id| id >= 1000));
}

fn evolved_best() -> WeightVector {
    let mut cfg = desk_config(11);
    cfg.decks = decks();
    cfg.generations = 8;
    evolve(&cfg).unwrap().best().unwrap().genome.weight_vector()
}

#[test]
fn strong_newcomer_tops_the_ledger() {
    let cfg = EvolutionConfig { games_per_pairing: 4, ..desk_config(9) };
    let mut pool: Vec<Genome> = (0..3).map(|id| Genome::from_weights(id, WeightVector::zeros(), 0.15)).collect();
    let mut strong = Genome::from_weights(3, evolved_best(), 0.15);
    strong.birth_generation = 1;
    pool.push(strong);
    let ledger = evaluate(&pool, &cfg, 1).unwrap();
    let f = ledger.fitness();
    assert!(f[3] > *f[..3].iter().max().unwrap(), "{f:?}");
}

#[test]
fn evolved_weights_beat_zero_weights() {
    let best = evolved_best();
    let d = decks();
    let mut wins = 0;
    for seed in 0..100u64 {
        let deck = &d[(seed % 3) as usize];
        let (mut e, mut z) = (greedy_policy(best), greedy_policy(WeightVector::zeros()));
        let won = if seed % 2 == 0 {
            play_match(&mut e, &mut z, deck, deck, seed).unwrap().outcome == Outcome::WinA
        } else {
            play_match(&mut z, &mut e, deck, deck, seed).unwrap().outcome == Outcome::WinB
        };
        wins += usize::from(won);
    }
    assert!(wins > 50, "{wins}");
}

#[test]
fn seats_are_balanced_within_each_pairing() {
    let agents: Vec<_> = (0..3u64).map(|i| (i, WeightVector::new([0.5; 21]).unwrap())).collect();
    let recs = run_round_robin(&agents, &decks()[..1], 4, 0, 0, 90).unwrap();
    assert_eq!(recs.len(), 12);
    for pair in recs.chunks(4) {
        let firsts: Vec<usize> = pair.iter().map(|r| r.cell.first()).collect();
        assert_eq!(firsts[0], pair[0].cell.i);
        assert_eq!(firsts.iter().filter(|&&f| f == pair[0].cell.i).count(), 2);
    }
    let seeds: std::collections::HashSet<u64> = recs.iter().map(|r| r.seed).collect();
    assert_eq!(seeds.len(), recs.len());
}

#[test]
fn snapshot_fields() {
    let art = evolve(&EvolutionConfig { generations: 0, ..desk_config(10) }).unwrap();
    let v = serde_json::to_value(&art.final_population()[0]).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["birthGeneration", "fitness", "id", "sigmas", "weights"]);
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = desk_config(1);
    cfg.mu = 0;
    assert!(evolve(&cfg).is_err());
    let mut cfg = desk_config(1);
    cfg.decks.clear();
    assert!(evolve(&cfg).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mutation_chains_keep_bounds(seed in any::<u64>(), lognormal in any::<bool>(), steps in 1usize..200) {
        let rule = if lognormal { SigmaRule::LogNormal } else { SigmaRule::Additive };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = desk_config(seed);
        let mut g = init_population(&cfg, &mut rng).remove(0);
        for step in 0..steps {
            g = mutate(&g, rule, step as u64 + 100, step as u32 + 1, &mut rng);
            prop_assert!(g.weights.iter().all(|w| (0.0..=1.0).contains(w)));
            prop_assert!(g.sigmas.iter().all(|&s| s >= SIGMA_FLOOR && s.is_finite()));
            prop_assert_eq!(g.weights.len(), GENE_COUNT);
        }
    }
}
