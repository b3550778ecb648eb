//! Lloyd's algorithm with k-means++ seeding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{euclidean, DenseMatrix};

use super::{ClusterParams, Clustering};

#[derive(Debug, Clone)]
pub struct KMeansOutput {
    pub clustering: Clustering,
    /// Inertia after each assignment step; non-increasing.
    pub inertia_trace: Vec<f64>,
    pub inertia: f64,
    pub iterations: usize,
}

/// Cluster `points` (one row per document) into `k` groups.
pub fn kmeans(points: &DenseMatrix, k: usize, seed: u64, max_iter: usize) -> Result<KMeansOutput> {
    let n = points.nrows();
    if n == 0 {
        return Err(Error::InvalidParam("kmeans: empty input".into()));
    }
    if k < 1 || k > n {
        return Err(Error::InvalidParam(format!(
            "kmeans: k must be in 1..={n}, got {k}"
        )));
    }
    if max_iter < 1 {
        return Err(Error::InvalidParam("kmeans: max_iter must be >= 1".into()));
    }
    let d = points.ncols();
    let mut centroids = plus_plus_seeds(points, k, seed);
    let mut labels = vec![0usize; n];
    let mut trace = Vec::new();
    let mut iterations = 0;

    for _ in 0..max_iter {
        iterations += 1;
        // Assignment: nearest centroid, ties to the lowest index. Rows are
        // independent; the indexed collect keeps the result order-stable.
        let new_labels: Vec<usize> = (0..n)
            .into_par_iter()
            .map(|i| nearest(points.row(i), &centroids).0)
            .collect();
        let inertia: f64 = (0..n)
            .map(|i| {
                let c = &centroids[new_labels[i]];
                let diff = euclidean(points.row(i), c);
                diff * diff
            })
            .sum();
        trace.push(inertia);
        let converged = new_labels == labels && trace.len() > 1;
        labels = new_labels;
        if converged {
            break;
        }
        // Update step.
        let mut sums = vec![vec![0.0f64; d]; k];
        let mut sizes = vec![0usize; k];
        for i in 0..n {
            sizes[labels[i]] += 1;
            for (s, &x) in sums[labels[i]].iter_mut().zip(points.row(i)) {
                *s += x;
            }
        }
        for c in 0..k {
            if sizes[c] > 0 {
                for s in sums[c].iter_mut() {
                    *s /= sizes[c] as f64;
                }
                centroids[c] = sums[c].clone();
            } else {
                // Re-seed an empty cluster to the point farthest from its
                // centroid (deterministic: max distance, then lowest index).
                if let Some(far) = farthest_point(points, &centroids, &labels, &sizes) {
                    centroids[c] = points.row(far).to_vec();
                }
            }
        }
    }

    // Compact labels in case a cluster ended empty (possible only with
    // duplicate points), so non-noise labels always form 0..k'-1.
    let (labels, centroids) = compact(labels, centroids, k);
    let k_final = centroids.len();
    let inertia = *trace.last().expect("at least one iteration");
    Ok(KMeansOutput {
        clustering: Clustering {
            labels,
            centroids: Some(DenseMatrix::from_rows(&centroids)),
            method: "kmeans".into(),
            params: ClusterParams::KMeans { k: k_final, max_iter },
            seed,
        },
        inertia_trace: trace,
        inertia,
        iterations,
    })
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0usize, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let dist = euclidean(point, centroid);
        if dist < best.1 {
            best = (c, dist);
        }
    }
    best
}

/// k-means++: first centroid uniform, later ones D²-weighted.
fn plus_plus_seeds(points: &DenseMatrix, k: usize, seed: u64) -> Vec<Vec<f64>> {
    let n = points.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    let first = rng.random_range(0..n);
    centroids.push(points.row(first).to_vec());
    let mut chosen = vec![false; n];
    chosen[first] = true;

    let mut d2: Vec<f64> = (0..n)
        .map(|i| {
            let d = euclidean(points.row(i), &centroids[0]);
            d * d
        })
        .collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if target < acc {
                    pick = Some(i);
                    break;
                }
            }
            pick.unwrap_or_else(|| d2.iter().rposition(|&w| w > 0.0).unwrap_or(n - 1))
        } else {
            // all points coincide with a centroid; take the lowest unchosen
            chosen.iter().position(|&c| !c).unwrap_or(0)
        };
        chosen[next] = true;
        centroids.push(points.row(next).to_vec());
        for i in 0..n {
            let d = euclidean(points.row(i), centroids.last().unwrap());
            d2[i] = d2[i].min(d * d);
        }
    }
    centroids
}

fn farthest_point(
    points: &DenseMatrix,
    centroids: &[Vec<f64>],
    labels: &[usize],
    sizes: &[usize],
) -> Option<usize> {
    let mut best: Option<(f64, usize)> = None;
    for i in 0..points.nrows() {
        // only steal from clusters that keep at least one point
        if sizes[labels[i]] < 2 {
            continue;
        }
        let d = euclidean(points.row(i), &centroids[labels[i]]);
        if best.is_none_or(|(bd, _)| d > bd) {
            best = Some((d, i));
        }
    }
    best.map(|(_, i)| i)
}

fn compact(labels: Vec<usize>, centroids: Vec<Vec<f64>>, k: usize) -> (Vec<i32>, Vec<Vec<f64>>) {
    let mut used = vec![false; k];
    for &l in &labels {
        used[l] = true;
    }
    let mut remap = vec![0usize; k];
    let mut kept = Vec::new();
    for (c, &u) in used.iter().enumerate() {
        if u {
            remap[c] = kept.len();
            kept.push(centroids[c].clone());
        }
    }
    let labels = labels.into_iter().map(|l| remap[l] as i32).collect();
    (labels, kept)
}
