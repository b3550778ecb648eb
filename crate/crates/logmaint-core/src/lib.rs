//! Text-mining toolkit for technical maintenance logbooks.
//!
//! The crate covers the full processing chain for free-text maintenance
//! records: corpus and language-resource loading, normalization and
//! correction of the noisy domain vocabulary, TF-IDF/LSA vectorization,
//! unsupervised clustering, and quantitative cluster evaluation.
//!
//! Modules follow the processing order:
//!
//! - [`corpus`] / [`resources`] — load logbook CSVs and the four resource
//!   files (abbreviations, morphosyntactic lexicon, stop words, term bank).
//! - [`textnorm`] — tokenization, stop-word removal, POS tagging,
//!   exception-aware lemmatization, stemming ([`stemmer`]).
//! - [`spellcorrect`] — Levenshtein correction against a domain dictionary,
//!   abbreviation expansion, and the corrector evaluation harness.
//! - [`vectorspace`] — TF-IDF document-term matrix and truncated-SVD (LSA)
//!   reduction ([`svd`]).
//! - [`clustering`] — k-means, DBSCAN, agglomerative hierarchical, LDA.
//! - [`evaluation`] — silhouette, inertia, perplexity, coherence,
//!   intra/inter-cluster similarity, gold-standard comparison.
//! - [`pipeline`] — end-to-end driver producing reproducible artifacts.

pub mod clustering;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod fixture;
pub mod jsonfmt;
pub mod matrix;
pub mod pipeline;
pub mod resources;
pub mod spellcorrect;
pub mod stemmer;
pub mod svd;
pub mod textnorm;
pub mod vectorspace;

pub use error::{Error, Result};
