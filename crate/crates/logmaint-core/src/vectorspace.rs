//! TF-IDF document-term matrix construction and LSA (truncated SVD)
//! reduction.
//!
//! Weights are `tf · log2(N/df)` with raw counts and no smoothing, so a
//! term occurring in every document vanishes. Rows are L2-normalized.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, SparseMatrix};
use crate::svd;
use crate::textnorm::ProcessedDocument;

/// Which annotation layer feeds the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenField {
    Surface,
    #[default]
    Lemma,
    Stem,
}

impl std::str::FromStr for TokenField {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "surface" => Ok(TokenField::Surface),
            "lemma" => Ok(TokenField::Lemma),
            "stem" => Ok(TokenField::Stem),
            other => Err(Error::InvalidParam(format!(
                "token field must be surface|lemma|stem, got {other:?}"
            ))),
        }
    }
}

/// Term ↔ column mapping with document frequencies. Term order is
/// first-occurrence order over the corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: BTreeMap<String, usize>,
    document_frequency: Vec<usize>,
}

impl Vocabulary {
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn df(&self, term: &str) -> Option<usize> {
        self.index_of(term).map(|i| self.document_frequency[i])
    }

    pub fn document_frequencies(&self) -> &[usize] {
        &self.document_frequency
    }
}

/// Sparse TF-IDF weights plus the raw term counts they were derived from
/// (LDA consumes the counts, everything else the weights).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentTermMatrix {
    /// L2-normalized TF-IDF weights, one row per document.
    pub weights: SparseMatrix,
    /// Raw term counts over the same vocabulary.
    pub counts: SparseMatrix,
}

impl DocumentTermMatrix {
    pub fn nrows(&self) -> usize {
        self.weights.nrows()
    }

    /// Dense TF-IDF row for one document.
    pub fn dense_row(&self, r: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.weights.ncols()];
        for (c, v) in self.weights.row(r) {
            out[c] = v;
        }
        out
    }
}

/// Options beyond the spec'd parameters; `sublinear_tf` replaces raw counts
/// with `1 + log2(tf)`.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct TfidfOptions {
    pub sublinear_tf: bool,
}

pub fn build_tfidf(
    documents: &[ProcessedDocument],
    token_field: TokenField,
    min_df: usize,
) -> Result<(Vocabulary, DocumentTermMatrix)> {
    build_tfidf_with(documents, token_field, min_df, TfidfOptions::default())
}

pub fn build_tfidf_with(
    documents: &[ProcessedDocument],
    token_field: TokenField,
    min_df: usize,
    options: TfidfOptions,
) -> Result<(Vocabulary, DocumentTermMatrix)> {
    if documents.is_empty() {
        return Err(Error::InvalidParam("no documents".into()));
    }
    if min_df < 1 {
        return Err(Error::InvalidParam("min_df must be >= 1".into()));
    }
    let n_docs = documents.len();
    let doc_tokens: Vec<Vec<&str>> = documents
        .iter()
        .map(|d| d.field_tokens(token_field))
        .collect();
    if doc_tokens.iter().all(|t| t.is_empty()) {
        return Err(Error::InvalidParam("all documents are empty".into()));
    }

    // First-occurrence order over the corpus, then df per term.
    let mut first_seen: Vec<String> = Vec::new();
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    let mut per_doc_counts: Vec<BTreeMap<&str, usize>> = Vec::with_capacity(n_docs);
    for tokens in &doc_tokens {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for &t in tokens {
            if !df.contains_key(t) && !counts.contains_key(t) {
                first_seen.push(t.to_string());
            }
            *counts.entry(t).or_insert(0) += 1;
        }
        for &t in counts.keys() {
            *df.entry(t).or_insert(0) += 1;
        }
        per_doc_counts.push(counts);
    }

    // Terms with df < min_df (hapax noise) or df = N (idf 0) are pruned.
    let kept: Vec<String> = first_seen
        .into_iter()
        .filter(|t| {
            let d = df[t.as_str()];
            d >= min_df && d < n_docs
        })
        .collect();
    if kept.is_empty() {
        return Err(Error::AllWeightsZero);
    }
    let index: BTreeMap<String, usize> = kept
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let document_frequency: Vec<usize> = kept.iter().map(|t| df[t.as_str()]).collect();

    let mut weight_rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n_docs);
    let mut count_rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n_docs);
    for counts in &per_doc_counts {
        let mut entries: Vec<(usize, f64, usize)> = counts
            .iter()
            .filter_map(|(&t, &c)| index.get(t).map(|&col| (col, c)))
            .map(|(col, c)| {
                let tf = if options.sublinear_tf {
                    1.0 + (c as f64).log2()
                } else {
                    c as f64
                };
                let idf = ((n_docs as f64) / (document_frequency[col] as f64)).log2();
                (col, tf * idf, c)
            })
            .collect();
        entries.sort_by_key(|&(col, _, _)| col);
        let norm = entries
            .iter()
            .map(|&(_, w, _)| w * w)
            .sum::<f64>()
            .sqrt();
        weight_rows.push(
            entries
                .iter()
                .map(|&(col, w, _)| (col, if norm > 0.0 { w / norm } else { 0.0 }))
                .collect(),
        );
        count_rows.push(entries.iter().map(|&(col, _, c)| (col, c as f64)).collect());
    }

    let vocabulary = Vocabulary {
        terms: kept,
        index,
        document_frequency,
    };
    let weights = SparseMatrix::from_rows(vocabulary.len(), &weight_rows);
    let counts = SparseMatrix::from_rows(vocabulary.len(), &count_rows);
    Ok((vocabulary, DocumentTermMatrix { weights, counts }))
}

/// LSA embedding: document rows are `Uᵢ · diag(σ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedMatrix {
    pub embedding: DenseMatrix,
    pub singular_values: Vec<f64>,
    /// k×|terms| right-singular rows.
    pub components: DenseMatrix,
}

pub fn lsa_reduce(matrix: &DocumentTermMatrix, k: usize, seed: u64) -> Result<ReducedMatrix> {
    let n = matrix.weights.nrows();
    let terms = matrix.weights.ncols();
    let bound = n.min(terms);
    if k < 1 || k > bound {
        return Err(Error::InvalidParam(format!(
            "lsa k must be in 1..={bound}, got {k}"
        )));
    }
    let svd = svd::truncated_svd(&matrix.weights, k, seed)?;
    let mut embedding = svd.u.clone();
    for r in 0..embedding.nrows() {
        let row = embedding.row_mut(r);
        for (j, s) in svd.singular_values.iter().enumerate() {
            row[j] *= s;
        }
    }
    Ok(ReducedMatrix {
        embedding,
        singular_values: svd.singular_values,
        components: svd.vt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::PosTag;
    use crate::textnorm::TokenAnnotation;

    pub(crate) fn doc(id: &str, tokens: &[&str]) -> ProcessedDocument {
        ProcessedDocument {
            record_id: id.into(),
            tokens: tokens
                .iter()
                .map(|t| TokenAnnotation {
                    surface: t.to_string(),
                    corrected: t.to_string(),
                    pos: PosTag::Noun,
                    lemma: t.to_string(),
                    stem: t.to_string(),
                })
                .collect(),
            dropped_stopwords: 0,
            empty: tokens.is_empty(),
        }
    }

    #[test]
    fn ubiquitous_terms_vanish() {
        let docs = vec![doc("1", &["a", "b"]), doc("2", &["a", "c"])];
        let (vocab, dtm) = build_tfidf(&docs, TokenField::Lemma, 1).unwrap();
        // df(a)=2=N so "a" is pruned; each row is a single unit weight.
        assert_eq!(vocab.terms(), ["b", "c"]);
        let row0 = dtm.dense_row(0);
        let row1 = dtm.dense_row(1);
        assert_eq!(row0, [1.0, 0.0]);
        assert_eq!(row1, [0.0, 1.0]);
    }

    #[test]
    fn single_document_corpus_is_all_weights_zero() {
        let docs = vec![doc("1", &["a", "b"])];
        let err = build_tfidf(&docs, TokenField::Lemma, 1).unwrap_err();
        assert!(matches!(err, Error::AllWeightsZero), "{err}");
    }

    #[test]
    fn weights_match_hand_computation() {
        let docs = vec![doc("1", &["b", "b", "c"]), doc("2", &["c", "d"])];
        let (vocab, dtm) = build_tfidf(&docs, TokenField::Lemma, 1).unwrap();
        // c appears in both docs -> pruned; weight(1,b) = 2·log2(2) = 2,
        // weight(2,d) = 1·log2(2) = 1; rows normalize to unit vectors.
        assert_eq!(vocab.terms(), ["b", "d"]);
        assert_eq!(dtm.dense_row(0), [1.0, 0.0]);
        assert_eq!(dtm.dense_row(1), [0.0, 1.0]);
        // pre-normalization weights visible through the counts and df
        assert_eq!(vocab.df("b"), Some(1));
        let counts0 = dtm.counts.row(0).collect::<Vec<_>>();
        assert_eq!(counts0, [(0, 2.0)]);
    }

    #[test]
    fn nonzero_rows_have_unit_norm() {
        let docs = vec![
            doc("1", &["seal", "leak", "engine"]),
            doc("2", &["seal", "screw"]),
            doc("3", &["screw", "baffle", "leak"]),
            doc("4", &[]),
        ];
        let (_, dtm) = build_tfidf(&docs, TokenField::Lemma, 1).unwrap();
        for norm in dtm.weights.row_norms() {
            assert!(norm == 0.0 || (norm - 1.0).abs() < 1e-9, "norm {norm}");
        }
    }

    #[test]
    fn min_df_prunes_hapaxes() {
        let docs = vec![
            doc("1", &["seal", "rare"]),
            doc("2", &["seal", "screw"]),
            doc("3", &["screw", "unique"]),
        ];
        let (vocab, _) = build_tfidf(&docs, TokenField::Lemma, 2).unwrap();
        assert_eq!(vocab.terms(), ["seal", "screw"]);
    }

    #[test]
    fn permutation_equivariance() {
        let docs = vec![
            doc("1", &["seal", "leak"]),
            doc("2", &["screw", "leak", "seal"]),
            doc("3", &["screw", "baffle"]),
        ];
        let (_, dtm) = build_tfidf(&docs, TokenField::Lemma, 1).unwrap();
        let permuted: Vec<ProcessedDocument> =
            vec![docs[2].clone(), docs[0].clone(), docs[1].clone()];
        let (pvocab, pdtm) = build_tfidf(&permuted, TokenField::Lemma, 1).unwrap();
        // same (document, term) weights, vocabulary rebuilt in new order
        for (orig_row, perm_row) in [(0usize, 1usize), (1, 2), (2, 0)] {
            let row = dtm.dense_row(orig_row);
            let prow = pdtm.dense_row(perm_row);
            let (vocab_terms, _) = build_tfidf(&docs, TokenField::Lemma, 1).unwrap();
            for (col, term) in vocab_terms.terms().iter().enumerate() {
                let pcol = pvocab.index_of(term).unwrap();
                assert!((row[col] - prow[pcol]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn lsa_diagonal_example() {
        let docs = vec![
            doc("1", &["a", "a", "a", "x"]),
            doc("2", &["b", "b", "x"]),
            doc("3", &["c", "x"]),
            doc("4", &["x", "x"]),
        ];
        let (_, dtm) = build_tfidf(&docs, TokenField::Lemma, 1).unwrap();
        let reduced = lsa_reduce(&dtm, 2, 42).unwrap();
        assert_eq!(reduced.embedding.nrows(), 4);
        assert_eq!(reduced.embedding.ncols(), 2);
        assert!(reduced.singular_values[0] >= reduced.singular_values[1]);
        assert!(reduced.singular_values[1] >= 0.0);
    }

    #[test]
    fn lsa_k_out_of_range() {
        let docs = vec![doc("1", &["a", "b"]), doc("2", &["b", "c"]), doc("3", &["c", "a"])];
        let (_, dtm) = build_tfidf(&docs, TokenField::Lemma, 1).unwrap();
        assert!(lsa_reduce(&dtm, 0, 42).is_err());
        assert!(lsa_reduce(&dtm, 10, 42).is_err());
    }

    #[test]
    fn eckart_young_monotonicity() {
        let docs = vec![
            doc("1", &["a", "b", "c"]),
            doc("2", &["b", "c", "d"]),
            doc("3", &["c", "d", "e"]),
            doc("4", &["d", "e", "a"]),
            doc("5", &["e", "a", "b"]),
        ];
        let (_, dtm) = build_tfidf(&docs, TokenField::Lemma, 1).unwrap();
        let dense = dtm.weights.to_dense();
        let mut last = f64::INFINITY;
        for k in 1..=4 {
            let reduced = lsa_reduce(&dtm, k, 42).unwrap();
            let approx = reduced.embedding.matmul(&reduced.components);
            let err = approx.sub(&dense).frobenius_norm();
            assert!(
                err <= last + 1e-9,
                "error should not increase with k: {err} after {last}"
            );
            last = err;
        }
    }
}
