//! Post-hoc analysis of evolved populations and tournament results.

mod cluster;
mod compare;
mod ranksum;
mod weights;
mod winrate;

use thiserror::Error;

pub use cluster::{
    euclidean_distance_matrix, silhouette_partition, silhouette_values, ward_clustering, Dendrogram, Merge, Partition,
};
pub use compare::{compare_groups, CompareCell, CompareGrid, CompareMode, SIGNIFICANCE};
pub use ranksum::{ranksum_test, RankSum, EXACT_LIMIT};
pub use weights::{export_weight_distributions, quantile, write_gnuplot_boxes, WeightSummary};
pub use winrate::{winrate_matrix, PlayedMatch, WinrateMatrix};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("no matches to aggregate")]
    EmptyMatchSet,
    #[error("vector {index} has {found} components, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("clustering needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("distance matrix is not square and symmetric")]
    InvalidDistances,
    #[error("cluster count {k} outside [2, {max}]")]
    InvalidRange { k: usize, max: usize },
    #[error("match refers to deck {0}, which has no label")]
    UnknownDeck(usize),
    #[error("no genomes to summarize")]
    EmptyPopulation,
}
