use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, ValueEnum};
use coevo::analysis::{
    compare_groups, euclidean_distance_matrix, export_weight_distributions, silhouette_partition, ward_clustering,
    winrate_matrix, write_gnuplot_boxes, CompareGrid, CompareMode,
};
use serde::{Deserialize, Serialize};

use crate::inputs::{config_error, create_dir, load_agents, write_file, write_json, Classify, Outcome};
use crate::tournament::{played_matches, MatchRow};

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    /// Five-number summary of each weight.
    Weights,
    /// Ward dendrogram and silhouette-chosen partition.
    Cluster,
    /// Rank-sum comparison of groups over a match tensor.
    Compare,
    /// Deck-versus-deck victory percentages.
    Winrate,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Population snapshots or weights files (weights, cluster).
    #[arg(long, num_args = 1..)]
    snapshot: Vec<PathBuf>,
    /// `matches.csv` from a tournament (compare, winrate).
    #[arg(long)]
    matches: Option<PathBuf>,
    /// `partition.csv` from cluster mode (compare).
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Only count games from these agents' point of view (winrate).
    #[arg(long, value_delimiter = ',')]
    agents: Vec<u64>,
    #[arg(long, default_value_t = 2)]
    k_min: usize,
    #[arg(long, default_value_t = 10)]
    k_max: usize,
    /// Also write gnuplot box data (weights).
    #[arg(long)]
    gnuplot: bool,
    #[arg(long, default_value = "analysis")]
    out: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct PartitionRow {
    agent: u64,
    label: String,
    group: usize,
}

#[derive(Serialize)]
struct CompareRow<'a> {
    first_group: usize,
    second_group: usize,
    own_deck: &'a str,
    opponent_deck: &'a str,
    n_first: usize,
    n_second: usize,
    statistic: f64,
    p_value: f64,
    direction: f64,
    significant: bool,
}

pub fn run(args: AnalyzeArgs) -> Outcome {
    match args.mode {
        Mode::Weights => weights(&args),
        Mode::Cluster => cluster(&args),
        Mode::Compare => compare(&args),
        Mode::Winrate => winrate(&args),
    }
}

fn need_snapshots(args: &AnalyzeArgs) -> Outcome {
    if args.snapshot.is_empty() {
        return config_error("this mode needs --snapshot");
    }
    Ok(())
}

fn weights(args: &AnalyzeArgs) -> Outcome {
    need_snapshots(args)?;
    let agents = load_agents(&args.snapshot)?;
    let weights: Vec<_> = agents.iter().map(|a| *a.weights.as_array()).collect();
    let rows = export_weight_distributions(&weights).config()?;
    create_dir(&args.out)?;
    let mut w = csv::Writer::from_path(args.out.join("weights_summary.csv")).runtime()?;
    for r in &rows {
        w.serialize(r).runtime()?;
    }
    w.flush().runtime()?;
    if args.gnuplot {
        let mut buf = Vec::new();
        write_gnuplot_boxes(&mut buf, &rows).runtime()?;
        write_file(&args.out.join("weights_boxes.dat"), buf)?;
    }
    println!("{} genomes summarized -> {}", weights.len(), args.out.display());
    Ok(())
}

fn cluster(args: &AnalyzeArgs) -> Outcome {
    need_snapshots(args)?;
    let agents = load_agents(&args.snapshot)?;
    let n = agents.len();
    if n < 3 {
        return config_error(format!("clustering needs at least 3 genomes, got {n}"));
    }
    let points: Vec<Vec<f64>> = agents.iter().map(|a| a.weights.as_array().to_vec()).collect();
    let distances = euclidean_distance_matrix(&points).config()?;
    let tree = ward_clustering(&distances).config()?;
    let k_max = args.k_max.min(n - 1);
    if args.k_min < 2 || args.k_min > k_max {
        return config_error(format!("cluster range {}..={} is empty for {n} genomes", args.k_min, args.k_max));
    }
    let partition = silhouette_partition(&tree, &distances, args.k_min..=k_max).config()?;

    create_dir(&args.out)?;
    let labels: Vec<&str> = agents.iter().map(|a| a.label.as_str()).collect();
    write_json(&args.out.join("dendrogram.json"), &serde_json::json!({ "leaves": labels, "merges": tree.merges }))?;
    let mut w = csv::Writer::from_path(args.out.join("partition.csv")).runtime()?;
    for (agent, (a, &group)) in agents.iter().zip(&partition.labels).enumerate() {
        w.serialize(PartitionRow { agent: agent as u64, label: a.label.clone(), group }).runtime()?;
    }
    w.flush().runtime()?;
    let mut w = csv::Writer::from_path(args.out.join("silhouette.csv")).runtime()?;
    w.write_record(["k", "mean_silhouette"]).runtime()?;
    for (k, s) in &partition.candidates {
        w.write_record([k.to_string(), s.to_string()]).runtime()?;
    }
    w.flush().runtime()?;
    println!(
        "{n} genomes, {} groups (mean silhouette {:.3}) -> {}",
        partition.k,
        partition.mean_silhouette,
        args.out.display()
    );
    Ok(())
}

fn read_matches(args: &AnalyzeArgs) -> Outcome<Vec<MatchRow>> {
    let Some(path) = args.matches.as_deref() else {
        return config_error("this mode needs --matches");
    };
    read_csv(path)
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Outcome<Vec<T>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display())).config()?;
    r.deserialize().collect::<Result<Vec<T>, _>>().with_context(|| format!("parsing {}", path.display())).config()
}

fn compare(args: &AnalyzeArgs) -> Outcome {
    let rows = read_matches(args)?;
    let Some(path) = args.partition.as_deref() else {
        return config_error("compare mode needs --partition");
    };
    let partition: Vec<PartitionRow> = read_csv(path)?;
    let group_of: BTreeMap<u64, usize> = partition.iter().map(|p| (p.agent, p.group)).collect();
    let (played, decks) = played_matches(&rows, Vec::new());
    create_dir(&args.out)?;
    for (mode, file) in
        [(CompareMode::AnyOpponent, "compare_any_opponent.csv"), (CompareMode::HeadToHead, "compare_head_to_head.csv")]
    {
        let grid = compare_groups(&played, &group_of, decks.len(), mode);
        write_grid(&args.out.join(file), &grid, &decks)?;
    }
    println!("{} matches compared -> {}", rows.len(), args.out.display());
    Ok(())
}

fn write_grid(path: &Path, grid: &CompareGrid, decks: &[String]) -> Outcome {
    let mut w = csv::Writer::from_path(path).runtime()?;
    for c in &grid.cells {
        w.serialize(CompareRow {
            first_group: c.first,
            second_group: c.second,
            own_deck: &decks[c.own_deck],
            opponent_deck: &decks[c.opponent_deck],
            n_first: c.n_first,
            n_second: c.n_second,
            statistic: c.statistic,
            p_value: c.p_value,
            direction: c.direction,
            significant: c.significant,
        })
        .runtime()?;
    }
    w.flush().runtime()
}

fn winrate(args: &AnalyzeArgs) -> Outcome {
    let rows = read_matches(args)?;
    let (played, decks) = played_matches(&rows, Vec::new());
    let keep = |id: u64| args.agents.contains(&id);
    let filter: Option<&dyn Fn(u64) -> bool> = if args.agents.is_empty() { None } else { Some(&keep) };
    let matrix = winrate_matrix(&played, &decks, filter).config()?;
    create_dir(&args.out)?;
    write_file(&args.out.join("winrate.csv"), matrix.to_csv())?;
    print!("{}", matrix.to_csv());
    Ok(())
}
