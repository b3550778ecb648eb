//! Cluster-quality metrics: silhouette and inertia, LDA perplexity and
//! UMass coherence, intra/inter-cluster similarity under Levenshtein, Jaro,
//! and cosine, and gold-standard comparison (purity, adjusted Rand index).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::clustering::{Clustering, TopicModel, NOISE};
use crate::error::{Error, Result};
use crate::matrix::{euclidean, DenseMatrix, SparseMatrix};
use crate::spellcorrect::levenshtein;

/// Mean and per-point silhouette scores; noise points carry `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SilhouetteScore {
    pub mean: f64,
    pub per_point: Vec<Option<f64>>,
}

/// s(i) = (b−a)/max(a,b) with a the mean intra-cluster distance and b the
/// smallest mean distance to another cluster. Singletons score 0 by
/// convention; DBSCAN noise points are excluded.
pub fn silhouette(points: &DenseMatrix, labels: &[i32]) -> Result<SilhouetteScore> {
    if points.nrows() != labels.len() {
        return Err(Error::LengthMismatch {
            left: points.nrows(),
            right: labels.len(),
        });
    }
    let mut clusters: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        if l != NOISE {
            clusters.entry(l).or_default().push(i);
        }
    }
    if clusters.len() < 2 {
        return Err(Error::InvalidParam(
            "silhouette requires at least 2 non-noise clusters".into(),
        ));
    }
    let mut per_point = vec![None; labels.len()];
    let mut total = 0.0;
    let mut count = 0usize;
    for (&label, members) in &clusters {
        for &i in members {
            let s = if members.len() == 1 {
                0.0
            } else {
                let a = members
                    .iter()
                    .filter(|&&j| j != i)
                    .map(|&j| euclidean(points.row(i), points.row(j)))
                    .sum::<f64>()
                    / (members.len() - 1) as f64;
                let b = clusters
                    .iter()
                    .filter(|(&other, _)| other != label)
                    .map(|(_, others)| {
                        others
                            .iter()
                            .map(|&j| euclidean(points.row(i), points.row(j)))
                            .sum::<f64>()
                            / others.len() as f64
                    })
                    .fold(f64::INFINITY, f64::min);
                let denom = a.max(b);
                if denom == 0.0 {
                    0.0
                } else {
                    (b - a) / denom
                }
            };
            per_point[i] = Some(s);
            total += s;
            count += 1;
        }
    }
    Ok(SilhouetteScore {
        mean: total / count as f64,
        per_point,
    })
}

/// Sum of squared Euclidean distances from each non-noise point to its
/// cluster centroid (taken from the clustering, or computed from labels).
pub fn inertia(points: &DenseMatrix, clustering: &Clustering) -> Result<f64> {
    if points.nrows() != clustering.labels.len() {
        return Err(Error::LengthMismatch {
            left: points.nrows(),
            right: clustering.labels.len(),
        });
    }
    let k = clustering.num_clusters();
    if k == 0 {
        return Err(Error::InvalidParam("inertia: empty clustering".into()));
    }
    let d = points.ncols();
    let centroids: Vec<Vec<f64>> = match &clustering.centroids {
        Some(c) => (0..c.nrows()).map(|r| c.row(r).to_vec()).collect(),
        None => {
            let mut sums = vec![vec![0.0; d]; k];
            let mut sizes = vec![0usize; k];
            for (i, &l) in clustering.labels.iter().enumerate() {
                if l == NOISE {
                    continue;
                }
                sizes[l as usize] += 1;
                for (s, &x) in sums[l as usize].iter_mut().zip(points.row(i)) {
                    *s += x;
                }
            }
            for (sum, &size) in sums.iter_mut().zip(&sizes) {
                if size > 0 {
                    for s in sum.iter_mut() {
                        *s /= size as f64;
                    }
                }
            }
            sums
        }
    };
    let mut total = 0.0;
    for (i, &l) in clustering.labels.iter().enumerate() {
        if l == NOISE {
            continue;
        }
        let dist = euclidean(points.row(i), &centroids[l as usize]);
        total += dist * dist;
    }
    Ok(total)
}

/// exp(−Σ n_dw·log p(w|d) / total tokens) with
/// p(w|d) = Σ_t doc_topic[d,t]·topic_word[t,w].
pub fn perplexity(model: &TopicModel, counts: &SparseMatrix) -> Result<f64> {
    if counts.nrows() != model.doc_topic.nrows() || counts.ncols() != model.vocab_size() {
        return Err(Error::LengthMismatch {
            left: counts.nrows(),
            right: model.doc_topic.nrows(),
        });
    }
    let t = model.num_topics();
    let mut log_likelihood = 0.0;
    let mut tokens = 0.0;
    for (d, w, n) in counts.triplets() {
        let p: f64 = (0..t)
            .map(|k| model.doc_topic.get(d, k) * model.topic_word.get(k, w))
            .sum();
        assert!(p > 0.0, "smoothed topic model assigned zero probability");
        log_likelihood += n * p.ln();
        tokens += n;
    }
    if tokens == 0.0 {
        return Err(Error::InvalidParam("perplexity: no tokens".into()));
    }
    Ok((-log_likelihood / tokens).exp())
}

/// UMass coherence of each topic's `top_n` words, averaged over topics.
///
/// For top words ordered by probability, each pair (i<j) contributes
/// log((D(wᵢ,wⱼ)+1)/D(wⱼ)) with D document (co-)occurrence counts.
pub fn coherence(model: &TopicModel, counts: &SparseMatrix, top_n: usize) -> Result<f64> {
    if top_n < 2 {
        return Err(Error::InvalidParam("coherence: top_n must be >= 2".into()));
    }
    let n_docs = counts.nrows();
    let vocab = counts.ncols();
    // document occurrence sets as sorted vecs
    let mut doc_sets: Vec<Vec<usize>> = vec![Vec::new(); vocab];
    for (d, w, n) in counts.triplets() {
        if n > 0.0 {
            doc_sets[w].push(d);
        }
    }
    let _ = n_docs;
    let co_occur = |a: usize, b: usize| -> usize {
        let (mut i, mut j) = (0, 0);
        let (sa, sb) = (&doc_sets[a], &doc_sets[b]);
        let mut count = 0;
        while i < sa.len() && j < sb.len() {
            match sa[i].cmp(&sb[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    };

    let mut topic_scores = Vec::with_capacity(model.num_topics());
    for topic in 0..model.num_topics() {
        let top = model.top_words(topic, top_n);
        let mut score = 0.0;
        for i in 0..top.len() {
            for j in i + 1..top.len() {
                let d_j = doc_sets[top[j]].len();
                assert!(
                    d_j > 0,
                    "top word has zero document frequency; vocabulary must come from counts"
                );
                let d_ij = co_occur(top[i], top[j]);
                score += ((d_ij as f64 + 1.0) / d_j as f64).ln();
            }
        }
        topic_scores.push(score);
    }
    Ok(topic_scores.iter().sum::<f64>() / topic_scores.len() as f64)
}

/// Similarity metrics for intra/inter-cluster comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityMetric {
    Levenshtein,
    Jaro,
    Cosine,
}

impl std::str::FromStr for SimilarityMetric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "levenshtein" => Ok(SimilarityMetric::Levenshtein),
            "jaro" => Ok(SimilarityMetric::Jaro),
            "cosine" => Ok(SimilarityMetric::Cosine),
            other => Err(Error::UnknownMetric(other.to_string())),
        }
    }
}

impl SimilarityMetric {
    pub fn as_str(&self) -> &'static str {
        match self {
            SimilarityMetric::Levenshtein => "levenshtein",
            SimilarityMetric::Jaro => "jaro",
            SimilarityMetric::Cosine => "cosine",
        }
    }
}

/// 1 − dist/max(|a|,|b|), and 1.0 for two empty strings.
pub fn levenshtein_similarity(a: &str, b: &str) -> f64 {
    let max_len = a.chars().count().max(b.chars().count());
    if max_len == 0 {
        return 1.0;
    }
    1.0 - levenshtein(a, b) as f64 / max_len as f64
}

/// Jaro similarity: matches within the standard window, transposition
/// discount, in [0, 1].
pub fn jaro_similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut a_matched = vec![false; a.len()];
    let mut b_matched = vec![false; b.len()];
    let mut matches = 0usize;
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_matched[j] && b[j] == ca {
                a_matched[i] = true;
                b_matched[j] = true;
                matches += 1;
                break;
            }
        }
    }
    if matches == 0 {
        return 0.0;
    }
    // Transpositions: matched characters out of sequence, halved (integer
    // halving, as in Winkler's original strcmp95).
    let mut out_of_order = 0usize;
    let mut j = 0usize;
    for (i, &matched) in a_matched.iter().enumerate() {
        if !matched {
            continue;
        }
        while !b_matched[j] {
            j += 1;
        }
        if a[i] != b[j] {
            out_of_order += 1;
        }
        j += 1;
    }
    let transpositions = (out_of_order / 2) as f64;
    let m = matches as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - transpositions) / m) / 3.0
}

/// dot/(‖a‖·‖b‖), and 0.0 when either vector is zero.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        (dot / (na * nb)).clamp(-1.0, 1.0)
    }
}

/// String-metric dispatch for the two text metrics.
pub fn string_similarity(a: &str, b: &str, metric: SimilarityMetric) -> Result<f64> {
    match metric {
        SimilarityMetric::Levenshtein => Ok(levenshtein_similarity(a, b)),
        SimilarityMetric::Jaro => Ok(jaro_similarity(a, b)),
        SimilarityMetric::Cosine => Err(Error::InvalidParam(
            "cosine similarity operates on TF-IDF vectors, not strings".into(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterStats {
    pub size: usize,
    /// Mean pairwise similarity within the cluster; 1.0 for singletons.
    pub intra_similarity: f64,
}

/// Mean similarity over every cross pair of two clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterEntry {
    pub a: i32,
    pub b: i32,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSimilarityReport {
    pub metric: SimilarityMetric,
    pub per_cluster: BTreeMap<i32, ClusterStats>,
    pub inter: Vec<InterEntry>,
}

/// Inputs for the similarity report: space-joined preprocessed token strings
/// for the string metrics, TF-IDF rows for cosine.
pub struct DocumentRepresentation<'a> {
    pub texts: &'a [String],
    pub vectors: Option<&'a crate::vectorspace::DocumentTermMatrix>,
}

/// Per-cluster intra-similarity means and the symmetric inter-cluster
/// matrix. Noise points (label −1) form their own reported group.
pub fn cluster_similarity_report(
    docs: &DocumentRepresentation<'_>,
    labels: &[i32],
    metric: SimilarityMetric,
) -> Result<ClusterSimilarityReport> {
    if docs.texts.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: docs.texts.len(),
            right: labels.len(),
        });
    }
    if labels.is_empty() {
        return Err(Error::InvalidParam("similarity report: no documents".into()));
    }
    let vectors: Option<Vec<Vec<f64>>> = match (metric, docs.vectors) {
        (SimilarityMetric::Cosine, Some(dtm)) => {
            if dtm.nrows() != labels.len() {
                return Err(Error::LengthMismatch {
                    left: dtm.nrows(),
                    right: labels.len(),
                });
            }
            Some((0..dtm.nrows()).map(|r| dtm.dense_row(r)).collect())
        }
        (SimilarityMetric::Cosine, None) => {
            return Err(Error::InvalidParam(
                "cosine similarity report needs the TF-IDF matrix".into(),
            ))
        }
        _ => None,
    };
    let pair_similarity = |i: usize, j: usize| -> f64 {
        match &vectors {
            Some(v) => cosine_similarity(&v[i], &v[j]),
            None => match metric {
                SimilarityMetric::Levenshtein => {
                    levenshtein_similarity(&docs.texts[i], &docs.texts[j])
                }
                SimilarityMetric::Jaro => jaro_similarity(&docs.texts[i], &docs.texts[j]),
                SimilarityMetric::Cosine => unreachable!(),
            },
        }
    };

    let mut clusters: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        clusters.entry(l).or_default().push(i);
    }
    let mut per_cluster = BTreeMap::new();
    for (&label, members) in &clusters {
        let intra = if members.len() < 2 {
            1.0
        } else {
            let mut sum = 0.0;
            let mut pairs = 0usize;
            for x in 0..members.len() {
                for y in x + 1..members.len() {
                    sum += pair_similarity(members[x], members[y]);
                    pairs += 1;
                }
            }
            sum / pairs as f64
        };
        per_cluster.insert(
            label,
            ClusterStats {
                size: members.len(),
                intra_similarity: intra,
            },
        );
    }
    let keys: Vec<i32> = clusters.keys().copied().collect();
    let mut inter = Vec::new();
    for (ai, &a) in keys.iter().enumerate() {
        for &b in keys.iter().skip(ai + 1) {
            let mut sum = 0.0;
            let mut pairs = 0usize;
            for &i in &clusters[&a] {
                for &j in &clusters[&b] {
                    sum += pair_similarity(i, j);
                    pairs += 1;
                }
            }
            inter.push(InterEntry {
                a,
                b,
                similarity: sum / pairs as f64,
            });
        }
    }
    Ok(ClusterSimilarityReport {
        metric,
        per_cluster,
        inter,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldComparison {
    pub purity: f64,
    pub adjusted_rand_index: f64,
}

/// Purity and adjusted Rand index against expert labels. Noise points count
/// as their own singleton clusters.
pub fn compare_to_gold(labels: &[i32], gold: &[i32]) -> Result<GoldComparison> {
    if labels.len() != gold.len() {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: gold.len(),
        });
    }
    if labels.is_empty() {
        return Err(Error::InvalidParam("compare_to_gold: empty labels".into()));
    }
    let promote = |v: &[i32]| -> Vec<i64> {
        let mut next = v.iter().map(|&l| i64::from(l)).max().unwrap_or(0) + 1;
        v.iter()
            .map(|&l| {
                if l == NOISE {
                    let id = next;
                    next += 1;
                    id
                } else {
                    i64::from(l)
                }
            })
            .collect()
    };
    let left = promote(labels);
    let right = promote(gold);
    let n = left.len();

    let mut contingency: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    let mut left_sizes: BTreeMap<i64, u64> = BTreeMap::new();
    let mut right_sizes: BTreeMap<i64, u64> = BTreeMap::new();
    for i in 0..n {
        *contingency.entry((left[i], right[i])).or_insert(0) += 1;
        *left_sizes.entry(left[i]).or_insert(0) += 1;
        *right_sizes.entry(right[i]).or_insert(0) += 1;
    }

    // purity: dominant gold class per cluster
    let mut best_per_cluster: BTreeMap<i64, u64> = BTreeMap::new();
    for (&(c, _), &count) in &contingency {
        let entry = best_per_cluster.entry(c).or_insert(0);
        *entry = (*entry).max(count);
    }
    let purity = best_per_cluster.values().sum::<u64>() as f64 / n as f64;

    let choose2 = |x: u64| -> f64 { (x as f64) * (x as f64 - 1.0) / 2.0 };
    let sum_ij: f64 = contingency.values().map(|&c| choose2(c)).sum();
    let sum_a: f64 = left_sizes.values().map(|&c| choose2(c)).sum();
    let sum_b: f64 = right_sizes.values().map(|&c| choose2(c)).sum();
    let total_pairs = choose2(n as u64);
    let expected = sum_a * sum_b / total_pairs;
    let max_index = (sum_a + sum_b) / 2.0;
    let denom = max_index - expected;
    let adjusted_rand_index = if denom == 0.0 {
        // both partitions all-singletons or a single block: identical
        1.0
    } else {
        (sum_ij - expected) / denom
    };
    Ok(GoldComparison {
        purity,
        adjusted_rand_index,
    })
}

/// Full evaluation output for one clustering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub method: String,
    pub metrics: BTreeMap<String, f64>,
    pub per_cluster: BTreeMap<i32, ClusterStats>,
    pub inter_matrix: Vec<InterEntry>,
    pub gold: Option<GoldComparison>,
}
