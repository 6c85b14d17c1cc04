use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, ValueEnum};
use coevo::coevolution::{evolve_with, EvolutionConfig, GenerationRecord, SigmaRule, DEFAULT_INITIAL_SIGMA};
use coevo::engine::DEFAULT_TURN_CAP;
use coevo::seed;
use serde::Serialize;

use crate::inputs::{
    config_error, create_dir, deck_info, load_catalog, load_decks, worker_pool, write_json, Classify, DeckInfo,
    Outcome, WeightsFile,
};

#[derive(Clone, Copy, ValueEnum)]
pub enum SigmaRuleArg {
    /// Adds the log-normal factor to each step size.
    Additive,
    /// Multiplies each step size by the log-normal factor.
    #[value(name = "lognormal")]
    LogNormal,
}

#[derive(Args)]
pub struct TrainArgs {
    /// Parents kept each generation.
    #[arg(long, default_value_t = 10)]
    mu: usize,
    /// Offspring per generation.
    #[arg(long, default_value_t = 10)]
    lambda: usize,
    #[arg(long, default_value_t = 100)]
    generations: u32,
    /// Games per agent pair and deck pairing.
    #[arg(long, default_value_t = 20)]
    games: u32,
    /// Deck files, comma separated. Defaults to the shipped decks.
    #[arg(long, value_delimiter = ',')]
    decks: Vec<PathBuf>,
    /// Card catalog JSON. Defaults to the shipped pool.
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent runs, each with its own derived seed.
    #[arg(long, default_value_t = 10)]
    runs: u32,
    #[arg(long, default_value = "runs")]
    out: PathBuf,
    /// Evaluation threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, value_enum, default_value = "additive")]
    sigma_rule: SigmaRuleArg,
    #[arg(long, default_value_t = DEFAULT_INITIAL_SIGMA)]
    initial_sigma: f64,
    /// Half-turns after which a game is drawn.
    #[arg(long, default_value_t = DEFAULT_TURN_CAP)]
    turn_cap: u32,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ConfigEcho {
    mu: usize,
    lambda: usize,
    generations: u32,
    games_per_pairing: u32,
    runs: u32,
    sigma_rule: &'static str,
    initial_sigma: f64,
    turn_cap: u32,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    master_seed: u64,
    run_index: u32,
    run_seed: u64,
    config: &'a ConfigEcho,
    catalog_sha256: &'a str,
    decks: &'a [DeckInfo],
    started_at: u64,
    finished_at: Option<u64>,
}

#[derive(Serialize)]
struct StatsRow {
    generation: u32,
    min: u64,
    median: f64,
    max: u64,
    mean_age: f64,
    entrants: usize,
    max_possible: u64,
    median_share: f64,
    max_share: f64,
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Seed of run `index` under `master`.
pub fn run_seed(master: u64, index: u32) -> u64 {
    seed::derive(master, &[u64::from(index)])
}

pub fn run(args: TrainArgs) -> Outcome {
    if args.runs == 0 {
        return config_error("--runs must be at least 1");
    }
    if args.turn_cap == 0 {
        return config_error("--turn-cap must be at least 1");
    }
    let source = load_catalog(args.catalog.as_deref())?;
    let decks = load_decks(&args.decks, &source.catalog)?;
    let rule = match args.sigma_rule {
        SigmaRuleArg::Additive => SigmaRule::Additive,
        SigmaRuleArg::LogNormal => SigmaRule::LogNormal,
    };
    let mut cfg = EvolutionConfig::new(decks);
    cfg.mu = args.mu;
    cfg.lambda = args.lambda;
    cfg.generations = args.generations;
    cfg.games_per_pairing = args.games;
    cfg.runs = args.runs;
    cfg.sigma_rule = rule;
    cfg.initial_sigma = args.initial_sigma;
    cfg.turn_cap = args.turn_cap;
    cfg.validate().config()?;

    let echo = ConfigEcho {
        mu: cfg.mu,
        lambda: cfg.lambda,
        generations: cfg.generations,
        games_per_pairing: cfg.games_per_pairing,
        runs: cfg.runs,
        sigma_rule: match rule {
            SigmaRule::Additive => "additive",
            SigmaRule::LogNormal => "lognormal",
        },
        initial_sigma: cfg.initial_sigma,
        turn_cap: cfg.turn_cap,
    };
    let decks_info = deck_info(&cfg.decks);
    let pool = worker_pool(args.workers)?;

    for index in 0..args.runs {
        let dir = args.out.join(format!("run_{index:02}"));
        let snapshots = dir.join("snapshots");
        create_dir(&snapshots)?;
        let mut run_cfg = cfg.clone();
        run_cfg.master_seed = run_seed(args.seed, index);
        let mut manifest = Manifest {
            tool: "coevo",
            version: env!("CARGO_PKG_VERSION"),
            master_seed: args.seed,
            run_index: index,
            run_seed: run_cfg.master_seed,
            config: &echo,
            catalog_sha256: &source.sha256,
            decks: &decks_info,
            started_at: unix_now(),
            finished_at: None,
        };
        write_json(&dir.join("manifest.json"), &manifest)?;

        let stats_path = dir.join("stats.csv");
        let mut stats = csv::Writer::from_path(&stats_path).runtime()?;
        let mut write_generation = |rec: &GenerationRecord| -> Result<(), coevo::coevolution::ObserverError> {
            let st = &rec.stats;
            let path = snapshots.join(format!("gen_{:04}.json", st.generation));
            let mut text = serde_json::to_string_pretty(&rec.population)?;
            text.push('\n');
            std::fs::write(&path, text)?;
            if st.generation > 0 {
                stats.serialize(StatsRow {
                    generation: st.generation,
                    min: st.min,
                    median: st.median,
                    max: st.max,
                    mean_age: st.mean_age,
                    entrants: st.entrants,
                    max_possible: st.max_possible,
                    median_share: st.median_share(),
                    max_share: st.max_share(),
                })?;
                stats.flush()?;
            }
            Ok(())
        };
        let artifact = pool.install(|| evolve_with(&run_cfg, &mut write_generation));
        stats.flush().runtime()?;
        let artifact = artifact.runtime()?;

        let final_population = artifact.final_population();
        write_json(&dir.join("final_population.json"), &final_population)?;
        if let Some(best) = artifact.best() {
            write_json(&dir.join("best.json"), &WeightsFile::from_genome(&best.genome))?;
        }
        manifest.finished_at = Some(unix_now());
        write_json(&dir.join("manifest.json"), &manifest)?;
        let last = artifact.stats().last().expect("generation 0 exists");
        println!(
            "run {index}: best {}/{} after {} generations -> {}",
            last.max,
            last.max_possible,
            last.generation,
            dir.display()
        );
    }
    Ok(())
}
