//! Latent Dirichlet allocation fit by collapsed Gibbs sampling.
//!
//! Sampling is strictly sequential in (document, token) order with a seeded
//! generator, so a fixed seed reproduces the model bit for bit. The returned
//! distributions are smoothed posterior point estimates taken after the last
//! sweep.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, SparseMatrix};

/// Fitted topic model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    /// T×V; each row sums to 1.
    pub topic_word: DenseMatrix,
    /// N×T; each row sums to 1 (uniform for empty documents).
    pub doc_topic: DenseMatrix,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl TopicModel {
    pub fn num_topics(&self) -> usize {
        self.topic_word.nrows()
    }

    pub fn vocab_size(&self) -> usize {
        self.topic_word.ncols()
    }

    /// Indices of the `top_n` most probable words per topic; exact
    /// probability ties resolve to the lower word index.
    pub fn top_words(&self, topic: usize, top_n: usize) -> Vec<usize> {
        let row = self.topic_word.row(topic);
        let mut order: Vec<usize> = (0..row.len()).collect();
        order.sort_by(|&i, &j| row[j].partial_cmp(&row[i]).unwrap().then(i.cmp(&j)));
        order.truncate(top_n);
        order
    }

    /// Hard assignment: most probable topic per document, −1 for documents
    /// with no tokens.
    pub fn argmax_labels(&self, counts: &SparseMatrix) -> Vec<i32> {
        (0..self.doc_topic.nrows())
            .map(|d| {
                if counts.row(d).next().is_none() {
                    return -1;
                }
                let row = self.doc_topic.row(d);
                let mut best = 0usize;
                for t in 1..row.len() {
                    if row[t] > row[best] {
                        best = t;
                    }
                }
                best as i32
            })
            .collect()
    }
}

pub fn lda(
    counts: &SparseMatrix,
    num_topics: usize,
    alpha: f64,
    beta: f64,
    iterations: usize,
    seed: u64,
) -> Result<TopicModel> {
    if num_topics < 1 {
        return Err(Error::InvalidParam("lda: num_topics must be >= 1".into()));
    }
    if !(alpha > 0.0) || !(beta > 0.0) {
        return Err(Error::InvalidParam("lda: alpha and beta must be > 0".into()));
    }
    let n_docs = counts.nrows();
    let vocab = counts.ncols();
    if vocab == 0 || counts.nnz() == 0 {
        return Err(Error::InvalidParam("lda: all-zero count matrix".into()));
    }
    for (_, _, v) in counts.triplets() {
        if v < 0.0 || v.fract() != 0.0 {
            return Err(Error::InvalidParam(
                "lda: counts must be non-negative integers".into(),
            ));
        }
    }

    // Token stream per document, ascending word id, counts expanded.
    let docs: Vec<Vec<usize>> = (0..n_docs)
        .map(|d| {
            counts
                .row(d)
                .flat_map(|(w, c)| std::iter::repeat(w).take(c as usize))
                .collect()
        })
        .collect();

    let t = num_topics;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n_dt = vec![vec![0u32; t]; n_docs];
    let mut n_tw = vec![vec![0u32; vocab]; t];
    let mut n_t = vec![0u32; t];
    let mut assignments: Vec<Vec<usize>> = Vec::with_capacity(n_docs);
    for (d, tokens) in docs.iter().enumerate() {
        let mut z = Vec::with_capacity(tokens.len());
        for &w in tokens {
            let topic = rng.random_range(0..t);
            n_dt[d][topic] += 1;
            n_tw[topic][w] += 1;
            n_t[topic] += 1;
            z.push(topic);
        }
        assignments.push(z);
    }

    let vbeta = vocab as f64 * beta;
    let mut weights = vec![0.0f64; t];
    for _sweep in 0..iterations {
        for (d, tokens) in docs.iter().enumerate() {
            for (i, &w) in tokens.iter().enumerate() {
                let old = assignments[d][i];
                n_dt[d][old] -= 1;
                n_tw[old][w] -= 1;
                n_t[old] -= 1;

                let mut total = 0.0;
                for k in 0..t {
                    let p = (f64::from(n_dt[d][k]) + alpha)
                        * (f64::from(n_tw[k][w]) + beta)
                        / (f64::from(n_t[k]) + vbeta);
                    total += p;
                    weights[k] = total;
                }
                let target = rng.random::<f64>() * total;
                let new = weights
                    .iter()
                    .position(|&cum| target < cum)
                    .unwrap_or(t - 1);

                assignments[d][i] = new;
                n_dt[d][new] += 1;
                n_tw[new][w] += 1;
                n_t[new] += 1;
            }
        }
    }

    // Smoothed point estimates.
    let mut topic_word = DenseMatrix::zeros(t, vocab);
    for k in 0..t {
        let denom = f64::from(n_t[k]) + vbeta;
        for w in 0..vocab {
            topic_word.set(k, w, (f64::from(n_tw[k][w]) + beta) / denom);
        }
    }
    let talpha = t as f64 * alpha;
    let mut doc_topic = DenseMatrix::zeros(n_docs, t);
    for d in 0..n_docs {
        let len = docs[d].len() as f64;
        for k in 0..t {
            doc_topic.set(d, k, (f64::from(n_dt[d][k]) + alpha) / (len + talpha));
        }
    }
    Ok(TopicModel {
        topic_word,
        doc_topic,
        alpha,
        beta,
        iterations,
        seed,
    })
}
