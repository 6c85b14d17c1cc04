use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

/// Largest combined sample size for which the exact null distribution
/// is enumerated.
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankSum {
    /// Sum of the midranks of the first sample.
    pub statistic: f64,
    /// Mann–Whitney U of the first sample.
    pub u: f64,
    /// Normal deviate, present when the approximation was used.
    pub z: Option<f64>,
    /// Two-sided p-value.
    pub p_value: f64,
    pub exact: bool,
}

impl RankSum {
    /// Positive when the first sample tends to be larger.
    pub fn direction(&self, n_a: usize, n_b: usize) -> f64 {
        self.u - (n_a * n_b) as f64 / 2.0
    }
}

/// Midranks of the pooled samples, doubled so they stay integral.
fn doubled_midranks(pooled: &[f64]) -> (Vec<u64>, Vec<usize>) {
    let n = pooled.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));
    let mut ranks = vec![0u64; n];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pooled[order[end]] == pooled[order[start]] {
            end += 1;
        }
        // Positions start+1 ..= end, doubled mean = start + end + 1.
        let r = (start + end + 1) as u64;
        for &o in &order[start..end] {
            ranks[o] = r;
        }
        ties.push(end - start);
        start = end;
    }
    (ranks, ties)
}

/// Two-sided Wilcoxon rank-sum (Mann–Whitney) test. Small samples use
/// the exact permutation distribution of the midrank sum; larger ones a
/// tie-corrected normal approximation with continuity correction.
///
/// # Panics
/// If either sample is empty.
pub fn ranksum_test(a: &[f64], b: &[f64]) -> RankSum {
    assert!(!a.is_empty() && !b.is_empty(), "rank-sum samples must be non-empty");
    let (na, nb) = (a.len(), b.len());
    let n = na + nb;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = doubled_midranks(&pooled);
    let w2: u64 = ranks[..na].iter().sum();
    let statistic = w2 as f64 / 2.0;
    let u = statistic - (na * (na + 1)) as f64 / 2.0;

    if n <= EXACT_LIMIT {
        let p = exact_p(&ranks, na, w2);
        return RankSum { statistic, u, z: None, p_value: p, exact: true };
    }

    let mean_u = (na * nb) as f64 / 2.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (n * (n - 1)) as f64;
    let var = (na * nb) as f64 / 12.0 * ((n + 1) as f64 - tie_term);
    if var <= 0.0 {
        return RankSum { statistic, u, z: Some(0.0), p_value: 1.0, exact: false };
    }
    let z = ((u - mean_u).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::standard();
    let p = (2.0 * normal.sf(z)).min(1.0);
    RankSum { statistic, u, z: Some(z.copysign(u - mean_u)), p_value: p, exact: false }
}

/// Fraction of size-`k` subsets of `ranks` whose sum lies at least as far
/// from its expectation as `observed`.
fn exact_p(ranks: &[u64], k: usize, observed: u64) -> f64 {
    let total: u64 = ranks.iter().sum();
    // Subset counts by (size, sum); every count fits an f64 exactly for
    // the sizes allowed here.
    let max_sum = total as usize;
    let mut counts = vec![vec![0f64; max_sum + 1]; k + 1];
    counts[0][0] = 1.0;
    for &r in ranks {
        let r = r as usize;
        for size in (1..=k).rev() {
            let (lower, upper) = counts.split_at_mut(size);
            let from = &lower[size - 1];
            let to = &mut upper[0];
            for s in (r..=max_sum).rev() {
                to[s] += from[s - r];
            }
        }
    }
    // Expected doubled sum times n, kept in integers: E = k·total/n.
    let n = ranks.len() as i128;
    let centre = |s: u64| (i128::from(s) * n - k as i128 * i128::from(total)).abs();
    let limit = centre(observed);
    let all: f64 = counts[k].iter().sum();
    let extreme: f64 =
        counts[k].iter().enumerate().filter(|&(s, &c)| c > 0.0 && centre(s as u64) >= limit).map(|(_, &c)| c).sum();
    (extreme / all).min(1.0)
}
