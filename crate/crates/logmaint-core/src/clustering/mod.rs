//! The four clustering techniques used on logbook embeddings: k-means,
//! DBSCAN, agglomerative hierarchical, and LDA, plus k selection by
//! silhouette with an inspectable inertia table.

mod dbscan;
mod hierarchy;
mod kmeans;
mod lda;

pub use dbscan::dbscan;
pub use hierarchy::{hierarchical, Cut, Dendrogram, Linkage, Merge};
pub use kmeans::{kmeans, KMeansOutput};
pub use lda::{lda, TopicModel};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Reserved label for DBSCAN noise points and documents excluded from LDA.
pub const NOISE: i32 = -1;

/// Exact parameters a clustering was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum ClusterParams {
    KMeans {
        k: usize,
        max_iter: usize,
    },
    Dbscan {
        eps: f64,
        min_pts: usize,
    },
    Hierarchical {
        linkage: Linkage,
        cut: Cut,
        clusters: usize,
    },
    Lda {
        num_topics: usize,
        alpha: f64,
        beta: f64,
        iterations: usize,
    },
}

/// Flat cluster assignment. Non-noise labels always form a contiguous
/// `0..k−1` set; noise is `−1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub labels: Vec<i32>,
    /// k×d centroid matrix (k-means only).
    pub centroids: Option<DenseMatrix>,
    pub method: String,
    pub params: ClusterParams,
    pub seed: u64,
}

impl Clustering {
    /// Number of non-noise clusters.
    pub fn num_clusters(&self) -> usize {
        self.labels
            .iter()
            .filter(|&&l| l != NOISE)
            .map(|&l| l as usize + 1)
            .max()
            .unwrap_or(0)
    }
}

/// Per-k row of the model-selection table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSelectionRow {
    pub k: usize,
    pub silhouette: f64,
    pub inertia: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSelection {
    pub chosen_k: usize,
    pub table: Vec<KSelectionRow>,
}

/// Run k-means for each k in `k_range` and pick the k with the highest mean
/// silhouette (ties to the smaller k); the full table is returned so the
/// inertia elbow stays inspectable.
pub fn select_k(
    points: &DenseMatrix,
    k_range: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Result<KSelection> {
    let n = points.nrows();
    let (lo, hi) = (*k_range.start(), *k_range.end());
    if lo < 2 || hi + 1 > n || lo > hi {
        return Err(Error::InvalidParam(format!(
            "select_k: range must lie within 2..={}, got {lo}..={hi}",
            n.saturating_sub(1)
        )));
    }
    let mut table = Vec::new();
    let mut chosen = (lo, f64::NEG_INFINITY);
    for k in k_range {
        let out = kmeans(points, k, seed, 300)?;
        let silhouette = crate::evaluation::silhouette(points, &out.clustering.labels)?.mean;
        table.push(KSelectionRow {
            k,
            silhouette,
            inertia: out.inertia,
        });
        if silhouette > chosen.1 {
            chosen = (k, silhouette);
        }
    }
    Ok(KSelection {
        chosen_k: chosen.0,
        table,
    })
}
