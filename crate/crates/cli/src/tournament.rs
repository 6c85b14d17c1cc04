use std::path::PathBuf;

use clap::Args;
use coevo::analysis::{winrate_matrix, PlayedMatch};
use coevo::coevolution::{run_round_robin, schedule_len};
use coevo::engine::DEFAULT_TURN_CAP;
use serde::{Deserialize, Serialize};

use crate::inputs::{
    config_error, create_dir, load_agents, load_catalog, load_decks, worker_pool, write_file, Classify, Outcome,
};

#[derive(Args)]
pub struct TournamentArgs {
    /// Weights files or population snapshots; snapshots add every genome.
    #[arg(long = "weights", num_args = 1.., required = true)]
    weights: Vec<PathBuf>,
    /// Deck files, comma separated. Defaults to the shipped decks.
    #[arg(long, value_delimiter = ',')]
    decks: Vec<PathBuf>,
    /// Card catalog JSON. Defaults to the shipped pool.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Games per agent pair and deck pairing.
    #[arg(long, default_value_t = 1)]
    games: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "tournament")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_TURN_CAP)]
    turn_cap: u32,
    /// Print the schedule size and exit without playing.
    #[arg(long)]
    dry_run: bool,
}

/// One line of `matches.csv`. Agents are indices into `agents.csv`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchRow {
    pub agent_first: usize,
    pub agent_second: usize,
    pub deck_first: String,
    pub deck_second: String,
    pub game: u32,
    pub seed: u64,
    /// `first`, `second` or `draw`.
    pub winner: String,
    pub turns: u32,
}

#[derive(Serialize)]
struct AgentRow<'a> {
    agent: usize,
    label: &'a str,
}

/// Converts rows to analysis input. Decks keep their position in
/// `labels`; unseen names are appended in order of first appearance.
pub fn played_matches(rows: &[MatchRow], mut labels: Vec<String>) -> (Vec<PlayedMatch>, Vec<String>) {
    let mut index = |name: &str| match labels.iter().position(|l| l == name) {
        Some(i) => i,
        None => {
            labels.push(name.to_string());
            labels.len() - 1
        }
    };
    let matches = rows
        .iter()
        .map(|r| PlayedMatch {
            agents: [r.agent_first as u64, r.agent_second as u64],
            decks: [index(&r.deck_first), index(&r.deck_second)],
            winner: match r.winner.as_str() {
                "first" => Some(0),
                "second" => Some(1),
                _ => None,
            },
        })
        .collect();
    (matches, labels)
}

pub fn run(args: TournamentArgs) -> Outcome {
    let source = load_catalog(args.catalog.as_deref())?;
    let decks = load_decks(&args.decks, &source.catalog)?;
    let agents = load_agents(&args.weights)?;
    if agents.len() < 2 {
        return config_error(format!("a tournament needs at least 2 agents, got {}", agents.len()));
    }
    if args.games == 0 {
        return config_error("--games must be at least 1");
    }
    let total = schedule_len(agents.len(), decks.len(), args.games);
    if args.dry_run {
        let line = serde_json::json!({
            "agents": agents.len(),
            "decks": decks.len(),
            "games": args.games,
            "matches": total,
        });
        println!("{line}");
        return Ok(());
    }

    let roster: Vec<_> = agents.iter().enumerate().map(|(i, a)| (i as u64, a.weights)).collect();
    let pool = worker_pool(args.workers)?;
    let records =
        pool.install(|| run_round_robin(&roster, &decks, args.games, args.seed, 0, args.turn_cap)).runtime()?;

    let rows: Vec<MatchRow> = records
        .iter()
        .map(|r| {
            let c = r.cell;
            let (first, second) = if c.first() == c.i { (c.i, c.j) } else { (c.j, c.i) };
            let (df, ds) = if c.first() == c.i { (c.di, c.dj) } else { (c.dj, c.di) };
            MatchRow {
                agent_first: first,
                agent_second: second,
                deck_first: decks[df].name.clone(),
                deck_second: decks[ds].name.clone(),
                game: c.k,
                seed: r.seed,
                winner: match r.winner {
                    Some(w) if w == first => "first",
                    Some(_) => "second",
                    None => "draw",
                }
                .to_string(),
                turns: r.turns,
            }
        })
        .collect();

    create_dir(&args.out)?;
    let mut w = csv::Writer::from_path(args.out.join("matches.csv")).runtime()?;
    for row in &rows {
        w.serialize(row).runtime()?;
    }
    w.flush().runtime()?;
    let mut w = csv::Writer::from_path(args.out.join("agents.csv")).runtime()?;
    for (agent, a) in agents.iter().enumerate() {
        w.serialize(AgentRow { agent, label: &a.label }).runtime()?;
    }
    w.flush().runtime()?;

    let (played, labels) = played_matches(&rows, decks.iter().map(|d| d.name.clone()).collect());
    let matrix = winrate_matrix(&played, &labels, None).runtime()?;
    write_file(&args.out.join("winrate.csv"), matrix.to_csv())?;
    println!("{} matches -> {}", rows.len(), args.out.display());
    Ok(())
}
