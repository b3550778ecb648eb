//! DBSCAN with standard core/border/noise semantics.
//!
//! Clusters are the connected components of core points under
//! eps-adjacency; border points join the cluster of their nearest core
//! point. Component ids follow the ascending index of their first core
//! point, so the labeling is deterministic and independent of point order
//! up to renaming.

use crate::error::{Error, Result};
use crate::matrix::{euclidean, DenseMatrix};

use super::{ClusterParams, Clustering, NOISE};

pub fn dbscan(points: &DenseMatrix, eps: f64, min_pts: usize) -> Result<Clustering> {
    let n = points.nrows();
    if n == 0 {
        return Err(Error::InvalidParam("dbscan: empty input".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParam("dbscan: eps must be > 0".into()));
    }
    if min_pts < 1 {
        return Err(Error::InvalidParam("dbscan: min_pts must be >= 1".into()));
    }

    // Neighborhoods include the point itself.
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| euclidean(points.row(i), points.row(j)) <= eps)
                .collect()
        })
        .collect();
    let core: Vec<bool> = neighbors.iter().map(|nb| nb.len() >= min_pts).collect();

    // Connected components over core points.
    let mut labels = vec![NOISE; n];
    let mut next = 0i32;
    for start in 0..n {
        if !core[start] || labels[start] != NOISE {
            continue;
        }
        let id = next;
        next += 1;
        let mut queue = vec![start];
        labels[start] = id;
        while let Some(p) = queue.pop() {
            for &q in &neighbors[p] {
                if core[q] && labels[q] == NOISE {
                    labels[q] = id;
                    queue.push(q);
                }
            }
        }
    }

    // Border points: non-core within eps of a core point; nearest core wins.
    for i in 0..n {
        if core[i] || labels[i] != NOISE {
            continue;
        }
        let mut best: Option<(f64, i32)> = None;
        for &j in &neighbors[i] {
            if core[j] {
                let d = euclidean(points.row(i), points.row(j));
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, labels[j]));
                }
            }
        }
        if let Some((_, id)) = best {
            labels[i] = id;
        }
    }

    Ok(Clustering {
        labels,
        centroids: None,
        method: "dbscan".into(),
        params: ClusterParams::Dbscan { eps, min_pts },
        seed: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_blobs() -> DenseMatrix {
        DenseMatrix::from_rows(&[
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![10.0, 0.0],
            vec![10.0, 1.0],
        ])
    }

    #[test]
    fn recovers_two_blobs_without_noise() {
        let c = dbscan(&two_blobs(), 1.5, 2).unwrap();
        assert_eq!(c.labels, [0, 0, 1, 1]);
    }

    #[test]
    fn tiny_eps_marks_everything_noise() {
        let c = dbscan(&two_blobs(), 0.5, 2).unwrap();
        assert!(c.labels.iter().all(|&l| l == NOISE));
    }

    #[test]
    fn single_point_with_min_pts_one_is_its_own_cluster() {
        let points = DenseMatrix::from_rows(&[vec![3.0, 4.0]]);
        let c = dbscan(&points, 0.1, 1).unwrap();
        assert_eq!(c.labels, [0]);
    }

    #[test]
    fn border_point_attaches_to_nearest_core() {
        // dense blob at 0..0.4, border at 1.0 (within eps of core 0.4 only)
        let points = DenseMatrix::from_rows(&[
            vec![0.0],
            vec![0.2],
            vec![0.4],
            vec![1.0],
        ]);
        let c = dbscan(&points, 0.7, 3).unwrap();
        assert_eq!(c.labels, [0, 0, 0, 0]);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(dbscan(&two_blobs(), 0.0, 2).is_err());
        assert!(dbscan(&two_blobs(), 1.0, 0).is_err());
        assert!(dbscan(&DenseMatrix::zeros(0, 1), 1.0, 1).is_err());
    }

    #[test]
    fn order_independent_up_to_renaming() {
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|i| {
                let blob = i % 3;
                vec![
                    blob as f64 * 8.0 + ((i * 37) % 11) as f64 * 0.05,
                    blob as f64 * 3.0 + ((i * 53) % 13) as f64 * 0.04,
                ]
            })
            .collect();
        let points = DenseMatrix::from_rows(&rows);
        let direct = dbscan(&points, 1.0, 3).unwrap();

        // reverse the points, cluster, then map labels back
        let reversed = DenseMatrix::from_rows(&rows.iter().rev().cloned().collect::<Vec<_>>());
        let rev = dbscan(&reversed, 1.0, 3).unwrap();
        let n = rows.len();
        let undone: Vec<i32> = (0..n).map(|i| rev.labels[n - 1 - i]).collect();

        // canonicalize both by first-occurrence renaming
        fn canon(labels: &[i32]) -> Vec<i32> {
            let mut map = std::collections::BTreeMap::new();
            let mut next = 0i32;
            labels
                .iter()
                .map(|&l| {
                    if l == NOISE {
                        NOISE
                    } else {
                        *map.entry(l).or_insert_with(|| {
                            let v = next;
                            next += 1;
                            v
                        })
                    }
                })
                .collect()
        }
        assert_eq!(canon(&direct.labels), canon(&undone));
    }
}
