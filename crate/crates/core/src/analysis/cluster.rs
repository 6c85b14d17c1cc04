use serde::{Deserialize, Serialize};

use super::AnalysisError;

/// Pairwise Euclidean distances. All vectors must share the first one's
/// length.
pub fn euclidean_distance_matrix(points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, AnalysisError> {
    let dim = points.first().map_or(0, Vec::len);
    if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
        return Err(AnalysisError::DimensionMismatch { index, expected: dim, found: p.len() });
    }
    let n = points.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let s: f64 = points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            d[i][j] = s.sqrt();
            d[j][i] = d[i][j];
        }
    }
    Ok(d)
}

/// One agglomeration step. Leaves are `0..n`; the cluster created by
/// step `s` gets id `n + s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub leaves: usize,
    pub merges: Vec<Merge>,
}

impl Dendrogram {
    /// Flat labels for `k` clusters, numbered by first appearance.
    pub fn cut(&self, k: usize) -> Vec<usize> {
        let n = self.leaves;
        let k = k.clamp(1, n.max(1));
        let mut parent: Vec<usize> = (0..2 * n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (s, m) in self.merges.iter().take(n - k).enumerate() {
            let ra = find(&mut parent, m.a);
            let rb = find(&mut parent, m.b);
            parent[ra] = n + s;
            parent[rb] = n + s;
        }
        let mut names: Vec<Option<usize>> = vec![None; 2 * n];
        let mut next = 0;
        (0..n)
            .map(|i| {
                let r = find(&mut parent, i);
                *names[r].get_or_insert_with(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    }

    /// Leaf sets of every merge, in merge order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let n = self.leaves;
        let mut sets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let mut out = Vec::with_capacity(self.merges.len());
        for m in &self.merges {
            let mut s = sets[m.a].clone();
            s.extend_from_slice(&sets[m.b]);
            s.sort_unstable();
            sets.push(s.clone());
            out.push(s);
        }
        out
    }
}

fn check_square(d: &[Vec<f64>]) -> Result<(), AnalysisError> {
    let n = d.len();
    for (i, row) in d.iter().enumerate() {
        if row.len() != n || row[i] != 0.0 {
            return Err(AnalysisError::InvalidDistances);
        }
        for j in 0..i {
            if row[j] != d[j][i] || !row[j].is_finite() || row[j] < 0.0 {
                return Err(AnalysisError::InvalidDistances);
            }
        }
    }
    Ok(())
}

/// Ward agglomerative clustering using Lance–Williams updates on squared
/// distances. Merge heights are the square roots of the updated values.
/// Ties go to the pair with the smallest cluster ids.
pub fn ward_clustering(distances: &[Vec<f64>]) -> Result<Dendrogram, AnalysisError> {
    let n = distances.len();
    if n < 2 {
        return Err(AnalysisError::TooFewPoints(n));
    }
    check_square(distances)?;

    // Slots hold active clusters; a slot keeps its position when merged.
    let mut d2: Vec<Vec<f64>> = distances.iter().map(|row| row.iter().map(|x| x * x).collect()).collect();
    let mut id: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    let mut merges = Vec::with_capacity(n - 1);

    for step in 0..n - 1 {
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for p in 0..n {
            if !active[p] {
                continue;
            }
            for q in p + 1..n {
                if !active[q] {
                    continue;
                }
                let (lo, hi) = (id[p].min(id[q]), id[p].max(id[q]));
                let better = match best {
                    None => true,
                    Some((v, blo, bhi, _, _)) => d2[p][q] < v || (d2[p][q] == v && (lo, hi) < (blo, bhi)),
                };
                if better {
                    best = Some((d2[p][q], lo, hi, p, q));
                }
            }
        }
        let (v, lo, hi, p, q) = best.expect("at least two active clusters");
        let (np, nq) = (size[p] as f64, size[q] as f64);
        for r in 0..n {
            if !active[r] || r == p || r == q {
                continue;
            }
            let nr = size[r] as f64;
            let updated = ((np + nr) * d2[p][r] + (nq + nr) * d2[q][r] - nr * v) / (np + nq + nr);
            d2[p][r] = updated.max(0.0);
            d2[r][p] = d2[p][r];
        }
        active[q] = false;
        size[p] += size[q];
        id[p] = n + step;
        merges.push(Merge { a: lo, b: hi, height: v.sqrt(), size: size[p] });
    }
    Ok(Dendrogram { leaves: n, merges })
}

/// Silhouette width of every point under `labels`. Points alone in
/// their cluster score 0.
pub fn silhouette_values(distances: &[Vec<f64>], labels: &[usize]) -> Vec<f64> {
    let n = labels.len();
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut counts = vec![0usize; k];
    for &l in labels {
        counts[l] += 1;
    }
    (0..n)
        .map(|i| {
            let own = labels[i];
            if counts[own] <= 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; k];
            for j in 0..n {
                if j != i {
                    sums[labels[j]] += distances[i][j];
                }
            }
            let a = sums[own] / (counts[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own && counts[c] > 0)
                .map(|c| sums[c] / counts[c] as f64)
                .fold(f64::INFINITY, f64::min);
            if !b.is_finite() {
                return 0.0;
            }
            let m = a.max(b);
            if m == 0.0 {
                0.0
            } else {
                (b - a) / m
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub k: usize,
    pub labels: Vec<usize>,
    pub mean_silhouette: f64,
    /// Mean silhouette for every candidate, in the order tried.
    pub candidates: Vec<(usize, f64)>,
}

/// Cuts the dendrogram at each `k` and keeps the cut with the highest
/// mean silhouette; ties go to the smaller `k`.
pub fn silhouette_partition(
    dendrogram: &Dendrogram,
    distances: &[Vec<f64>],
    k_range: impl IntoIterator<Item = usize>,
) -> Result<Partition, AnalysisError> {
    let n = dendrogram.leaves;
    if distances.len() != n {
        return Err(AnalysisError::InvalidDistances);
    }
    let max = n.saturating_sub(1);
    let mut ks: Vec<usize> = k_range.into_iter().collect();
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() {
        return Err(AnalysisError::InvalidRange { k: 0, max });
    }
    if let Some(&k) = ks.iter().find(|&&k| k < 2 || k > max) {
        return Err(AnalysisError::InvalidRange { k, max });
    }
    let mut best: Option<Partition> = None;
    let mut candidates = Vec::with_capacity(ks.len());
    for k in ks {
        let labels = dendrogram.cut(k);
        let s = silhouette_values(distances, &labels);
        let mean = s.iter().sum::<f64>() / n as f64;
        candidates.push((k, mean));
        if best.as_ref().is_none_or(|b| mean > b.mean_silhouette) {
            best = Some(Partition { k, labels, mean_silhouette: mean, candidates: Vec::new() });
        }
    }
    let mut best = best.expect("non-empty range");
    best.candidates = candidates;
    Ok(best)
}
