//! Agglomerative hierarchical clustering.
//!
//! Average linkage (mean pairwise Euclidean distance) is the default;
//! single and complete linkage are available. Ties break by the smallest
//! pair of cluster ids, and merged clusters take fresh ids N, N+1, …
//! Cutting by threshold applies every merge whose distance does not exceed
//! it; cutting by count replays merges until that many clusters remain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{euclidean, DenseMatrix};

use super::{ClusterParams, Clustering};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    Single,
    #[default]
    Average,
    Complete,
}

impl std::str::FromStr for Linkage {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Linkage::Single),
            "average" => Ok(Linkage::Average),
            "complete" => Ok(Linkage::Complete),
            other => Err(Error::InvalidParam(format!(
                "linkage must be single|average|complete, got {other:?}"
            ))),
        }
    }
}

/// Where to cut the dendrogram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cut {
    Count(usize),
    Threshold(f64),
}

/// One agglomeration step: clusters `a` and `b` merged at `distance` into a
/// cluster of `size` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    /// N−1 merges for N points, distances non-decreasing under
    /// average/complete/single linkage.
    pub merges: Vec<Merge>,
    pub cut: Cut,
}

pub fn hierarchical(
    points: &DenseMatrix,
    linkage: Linkage,
    cut: Cut,
) -> Result<(Dendrogram, Clustering)> {
    let n = points.nrows();
    if n == 0 {
        return Err(Error::InvalidParam("hierarchical: empty input".into()));
    }
    match cut {
        Cut::Count(c) if c < 1 || c > n => {
            return Err(Error::InvalidParam(format!(
                "hierarchical: cut count must be in 1..={n}, got {c}"
            )))
        }
        Cut::Threshold(t) if t < 0.0 => {
            return Err(Error::InvalidParam(
                "hierarchical: cut threshold must be >= 0".into(),
            ))
        }
        _ => {}
    }

    // Active clusters keyed by id; merged clusters get ids n, n+1, …
    // dist holds linkage distances between active ids.
    let mut active: Vec<usize> = (0..n).collect();
    let mut sizes: Vec<usize> = vec![1; n];
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut dist: std::collections::BTreeMap<(usize, usize), f64> = std::collections::BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            dist.insert((i, j), euclidean(points.row(i), points.row(j)));
        }
    }

    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    while active.len() > 1 {
        // Smallest distance; ties by smallest (a, b).
        let (&(a, b), &d) = dist
            .iter()
            .min_by(|(ka, va), (kb, vb)| va.partial_cmp(vb).unwrap().then(ka.cmp(kb)))
            .expect("non-empty distance map");
        let new_id = n + merges.len();
        let new_size = sizes[a] + sizes[b];

        // Lance-Williams update against every other active cluster.
        let mut new_dists: Vec<(usize, f64)> = Vec::new();
        for &c in &active {
            if c == a || c == b {
                continue;
            }
            let dac = dist[&key(a, c)];
            let dbc = dist[&key(b, c)];
            let dnew = match linkage {
                Linkage::Single => dac.min(dbc),
                Linkage::Complete => dac.max(dbc),
                Linkage::Average => {
                    (sizes[a] as f64 * dac + sizes[b] as f64 * dbc) / new_size as f64
                }
            };
            new_dists.push((c, dnew));
        }
        active.retain(|&c| c != a && c != b);
        dist.retain(|&(x, y), _| {
            x != a && x != b && y != a && y != b
        });
        for (c, dnew) in new_dists {
            dist.insert(key(new_id, c), dnew);
        }
        active.push(new_id);
        let mut merged_members = members[a].clone();
        merged_members.extend_from_slice(&members[b]);
        members.push(merged_members);
        sizes.push(new_size);
        merges.push(Merge {
            a,
            b,
            distance: d,
            size: new_size,
        });
    }

    let labels = cut_labels(n, &merges, cut);
    let k = 1 + labels.iter().copied().max().unwrap_or(0) as usize;
    Ok((
        Dendrogram {
            merges,
            cut,
        },
        Clustering {
            labels,
            centroids: None,
            method: "hierarchical".into(),
            params: ClusterParams::Hierarchical { linkage, cut, clusters: k },
            seed: 0,
        },
    ))
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Replay merges against a union-find to produce flat labels for the cut.
fn cut_labels(n: usize, merges: &[Merge], cut: Cut) -> Vec<i32> {
    let applied: usize = match cut {
        Cut::Count(c) => n - c,
        Cut::Threshold(t) => merges.iter().take_while(|m| m.distance <= t).count(),
    };
    let total = n + merges.len();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for (step, m) in merges.iter().take(applied).enumerate() {
        let new_id = n + step;
        let ra = find(&mut parent, m.a);
        let rb = find(&mut parent, m.b);
        parent[ra] = new_id;
        parent[rb] = new_id;
    }
    // Label clusters by the smallest member point index, ascending.
    let mut roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut first_point_of_root: std::collections::BTreeMap<usize, usize> =
        std::collections::BTreeMap::new();
    for (i, &r) in roots.iter().enumerate() {
        first_point_of_root.entry(r).or_insert(i);
    }
    let mut order: Vec<(usize, usize)> = first_point_of_root
        .into_iter()
        .map(|(root, first)| (first, root))
        .collect();
    order.sort_unstable();
    let label_of_root: std::collections::BTreeMap<usize, i32> = order
        .into_iter()
        .enumerate()
        .map(|(label, (_, root))| (root, label as i32))
        .collect();
    roots.iter_mut().for_each(|r| *r = label_of_root[r] as usize);
    roots.into_iter().map(|r| r as i32).collect()
}
