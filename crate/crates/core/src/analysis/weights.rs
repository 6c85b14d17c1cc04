use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::agent::{WEIGHT_COUNT, WEIGHT_LABELS};

use super::AnalysisError;

/// Five-number summary of one weight across a set of genomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSummary {
    pub index: usize,
    pub label: String,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Linearly interpolated quantile of sorted data (Hyndman–Fan type 7).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// One summary row per weight, over every genome given.
pub fn export_weight_distributions(weights: &[[f64; WEIGHT_COUNT]]) -> Result<Vec<WeightSummary>, AnalysisError> {
    if weights.is_empty() {
        return Err(AnalysisError::EmptyPopulation);
    }
    Ok((0..WEIGHT_COUNT)
        .map(|i| {
            let mut col: Vec<f64> = weights.iter().map(|w| w[i]).collect();
            col.sort_by(f64::total_cmp);
            WeightSummary {
                index: i,
                label: WEIGHT_LABELS[i].to_string(),
                min: col[0],
                q1: quantile(&col, 0.25),
                median: quantile(&col, 0.5),
                q3: quantile(&col, 0.75),
                max: col[col.len() - 1],
            }
        })
        .collect())
}

/// Whitespace-separated rows `x label min q1 median q3 max`, readable by
/// gnuplot's `candlesticks` style.
pub fn write_gnuplot_boxes<W: Write>(out: &mut W, rows: &[WeightSummary]) -> io::Result<()> {
    writeln!(out, "# x label min q1 median q3 max")?;
    for r in rows {
        writeln!(out, "{} {} {} {} {} {} {}", r.index + 1, r.label, r.min, r.q1, r.median, r.q3, r.max)?;
    }
    Ok(())
}
