#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use rand::Rng;

pub fn random_points(rng: &mut impl Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.random()).collect()).collect()
}

/// Merge order by exhaustive search: at every step try every pair of
/// current clusters and take the one whose union grows the within-cluster
/// sum of squares least. Heights use the same scale as Ward linkage.
pub fn ward_oracle(points: &[Vec<f64>]) -> Vec<(Vec<usize>, f64)> {
    let sse = |members: &[usize]| -> f64 {
        let dim = points[0].len();
        let n = members.len() as f64;
        let mut total = 0.0;
        for k in 0..dim {
            let mean = members.iter().map(|&i| points[i][k]).sum::<f64>() / n;
            total += members.iter().map(|&i| (points[i][k] - mean).powi(2)).sum::<f64>();
        }
        total
    };
    let mut clusters: Vec<Vec<usize>> = (0..points.len()).map(|i| vec![i]).collect();
    let mut out = Vec::new();
    while clusters.len() > 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut u = clusters[a].clone();
                u.extend(&clusters[b]);
                let growth = sse(&u) - sse(&clusters[a]) - sse(&clusters[b]);
                if growth < best.0 {
                    best = (growth, a, b);
                }
            }
        }
        let (growth, a, b) = best;
        let mut u = clusters[a].clone();
        u.extend(clusters[b].clone());
        u.sort_unstable();
        clusters.remove(b);
        clusters.remove(a);
        clusters.push(u.clone());
        out.push((u, (2.0 * growth).sqrt()));
    }
    out
}

/// Silhouette straight from the definition.
pub fn silhouette_oracle(d: &[Vec<f64>], labels: &[usize]) -> Vec<f64> {
    let clusters: BTreeSet<usize> = labels.iter().copied().collect();
    (0..labels.len())
        .map(|i| {
            let mean_to = |c: usize| {
                let others: Vec<usize> = (0..labels.len()).filter(|&j| j != i && labels[j] == c).collect();
                others.iter().map(|&j| d[i][j]).sum::<f64>() / others.len() as f64
            };
            let own = labels.iter().filter(|&&l| l == labels[i]).count();
            if own == 1 {
                return 0.0;
            }
            let a = mean_to(labels[i]);
            let b = clusters.iter().filter(|&&c| c != labels[i]).map(|&c| mean_to(c)).fold(f64::INFINITY, f64::min);
            (b - a) / a.max(b)
        })
        .collect()
}

/// Exact two-sided p by listing every way to pick the first sample's
/// positions from the pooled midranks.
pub fn ranksum_oracle(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let ranks: Vec<f64> = pooled
        .iter()
        .map(|x| {
            let less = pooled.iter().filter(|y| *y < x).count() as f64;
            let equal = pooled.iter().filter(|y| *y == x).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect();
    let k = a.len();
    let expected = k as f64 * (n as f64 + 1.0) / 2.0;
    let observed: f64 = ranks[..k].iter().sum();
    let limit = (observed - expected).abs();
    let (mut hit, mut all) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        all += 1;
        let s: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ranks[i]).sum();
        if (s - expected).abs() >= limit - 1e-9 {
            hit += 1;
        }
    }
    hit as f64 / all as f64
}
