//! End-to-end pipeline: ingest → normalize → expand → correct → filter →
//! tag → lemmatize → stem → vectorize → reduce → cluster → evaluate.
//!
//! A run writes five artifacts into the output directory — processed.jsonl,
//! matrix.json, clusters.csv (+ clusters.meta.json), report.json, and
//! manifest.json — and is byte-for-byte reproducible from the manifest:
//! identical config and inputs give identical artifact bytes regardless of
//! thread count.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::clustering::{self, Clustering, Cut, Linkage, TopicModel};
use crate::corpus::{ColumnMapping, TextField};
use crate::error::{Error, Result};
use crate::evaluation::{self, EvaluationReport, SimilarityMetric};
use crate::matrix::DenseMatrix;
use crate::textnorm::{self, PreprocessOptions, ProcessedDocument};
use crate::vectorspace::{self, DocumentTermMatrix, ReducedMatrix, TfidfOptions, TokenField, Vocabulary};

pub const STAGES: [&str; 12] = [
    "ingest",
    "normalize",
    "expand",
    "correct",
    "filter",
    "tag",
    "lemmatize",
    "stem",
    "vectorize",
    "reduce",
    "cluster",
    "evaluate",
];

/// Which matrix the clustering runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterSpace {
    #[default]
    Lsa,
    Tfidf,
}

/// Clustering method and parameters, flat so it maps 1:1 onto config keys
/// and CLI flags. Fields irrelevant to the chosen method are ignored.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterConfig {
    /// kmeans | dbscan | hier | lda
    pub method: String,
    pub k: usize,
    pub max_iter: usize,
    /// DBSCAN has no defaults here: both eps and min_pts must be given.
    pub eps: Option<f64>,
    pub min_pts: Option<usize>,
    pub linkage: Linkage,
    pub cut_count: Option<usize>,
    pub cut_threshold: Option<f64>,
    pub num_topics: usize,
    /// LDA document smoothing; defaults to 50/num_topics when absent.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub space: ClusterSpace,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            method: "kmeans".into(),
            k: 8,
            max_iter: 300,
            eps: None,
            min_pts: None,
            linkage: Linkage::Average,
            cut_count: None,
            cut_threshold: None,
            num_topics: 8,
            alpha: None,
            beta: 0.01,
            iterations: 1000,
            space: ClusterSpace::Lsa,
        }
    }
}

/// Every pipeline parameter. Paths are kept as written and resolved against
/// a base directory at run time, so the manifest is location-independent.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: String,
    pub id_col: String,
    pub issue_col: String,
    pub date_col: Option<String>,
    pub action_col: Option<String>,
    pub text_field: TextField,
    /// Directory holding abbrev.tsv, lexicon.tsv, stopwords.txt, termbank.tsv.
    pub resources: String,
    pub token_field: TokenField,
    pub max_edit_distance: usize,
    pub min_df: usize,
    pub sublinear_tf: bool,
    pub lsa_k: usize,
    pub cluster: ClusterConfig,
    /// silhouette | inertia | perplexity | coherence | intra-inter:<metric>
    pub metrics: Vec<String>,
    pub gold: Option<String>,
    pub seed: u64,
    pub out_dir: String,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input: "corpus.csv".into(),
            id_col: "id".into(),
            issue_col: "issue".into(),
            date_col: None,
            action_col: None,
            text_field: TextField::Issue,
            resources: "resources".into(),
            token_field: TokenField::Lemma,
            max_edit_distance: 2,
            min_df: 2,
            sublinear_tf: false,
            lsa_k: 100,
            cluster: ClusterConfig::default(),
            metrics: vec![
                "silhouette".into(),
                "inertia".into(),
                "intra-inter:cosine".into(),
            ],
            gold: None,
            seed: 42,
            out_dir: "out".into(),
        }
    }
}

/// Execution knobs that do not influence artifact bytes and therefore stay
/// out of the config and manifest.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// 0 lets rayon pick.
    pub threads: usize,
    pub quiet: bool,
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub processed: PathBuf,
    pub matrix: PathBuf,
    pub clusters: PathBuf,
    pub clusters_meta: PathBuf,
    pub report: PathBuf,
    pub manifest: PathBuf,
}

impl PipelineOutcome {
    pub fn paths(&self) -> [&PathBuf; 6] {
        [
            &self.processed,
            &self.matrix,
            &self.clusters,
            &self.clusters_meta,
            &self.report,
            &self.manifest,
        ]
    }
}

/// On-disk layout of matrix.json: vocabulary, CSR-style triplets for both
/// the TF-IDF weights and the raw counts, and the LSA section with the
/// embedding as row-major floats.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub record_ids: Vec<String>,
    pub vocabulary: Vec<String>,
    pub document_frequency: Vec<usize>,
    pub docs: usize,
    pub terms: usize,
    pub tfidf: Vec<(usize, usize, f64)>,
    pub counts: Vec<(usize, usize, u64)>,
    pub lsa_k: usize,
    pub singular_values: Vec<f64>,
    /// Row-major docs×lsa_k.
    pub embedding: Vec<f64>,
    /// Row-major lsa_k×terms.
    pub components: Vec<f64>,
    pub token_field: TokenField,
    pub min_df: usize,
    pub seed: u64,
}

impl MatrixFile {
    pub fn new(
        record_ids: Vec<String>,
        vocabulary: &Vocabulary,
        dtm: &DocumentTermMatrix,
        reduced: &ReducedMatrix,
        token_field: TokenField,
        min_df: usize,
        seed: u64,
    ) -> MatrixFile {
        MatrixFile {
            record_ids,
            vocabulary: vocabulary.terms().to_vec(),
            document_frequency: vocabulary.document_frequencies().to_vec(),
            docs: dtm.weights.nrows(),
            terms: dtm.weights.ncols(),
            tfidf: dtm.weights.triplets().collect(),
            counts: dtm
                .counts
                .triplets()
                .map(|(r, c, v)| (r, c, v as u64))
                .collect(),
            lsa_k: reduced.singular_values.len(),
            singular_values: reduced.singular_values.clone(),
            embedding: reduced.embedding.data().to_vec(),
            components: reduced.components.data().to_vec(),
            token_field,
            min_df,
            seed,
        }
    }

    pub fn embedding_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_vec(self.docs, self.lsa_k, self.embedding.clone())
    }

    pub fn tfidf_matrix(&self) -> crate::matrix::SparseMatrix {
        triplets_to_sparse(self.docs, self.terms, self.tfidf.iter().copied())
    }

    pub fn counts_matrix(&self) -> crate::matrix::SparseMatrix {
        triplets_to_sparse(
            self.docs,
            self.terms,
            self.counts.iter().map(|&(r, c, v)| (r, c, v as f64)),
        )
    }

    /// Dense rows of the clustering space.
    pub fn space_matrix(&self, space: ClusterSpace) -> DenseMatrix {
        match space {
            ClusterSpace::Lsa => self.embedding_matrix(),
            ClusterSpace::Tfidf => self.tfidf_matrix().to_dense(),
        }
    }
}

fn triplets_to_sparse<I: Iterator<Item = (usize, usize, f64)>>(
    rows: usize,
    cols: usize,
    triplets: I,
) -> crate::matrix::SparseMatrix {
    let mut per_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); rows];
    for (r, c, v) in triplets {
        per_row[r].push((c, v));
    }
    crate::matrix::SparseMatrix::from_rows(cols, &per_row)
}

/// Sidecar next to clusters.csv: method, exact parameters, diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClustersMeta {
    pub method: String,
    pub params: clustering::ClusterParams,
    pub seed: u64,
    pub space: ClusterSpace,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inertia_trace: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub merges: Option<Vec<clustering::Merge>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perplexity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_points: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: PipelineConfig,
    /// sha256 of every input file, keyed by logical name.
    pub inputs: BTreeMap<String, String>,
    pub stages: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn hash_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

/// Paths that a config references, resolved against `base_dir`.
pub struct ResolvedPaths {
    pub input: PathBuf,
    pub abbrev: PathBuf,
    pub lexicon: PathBuf,
    pub stopwords: PathBuf,
    pub termbank: PathBuf,
    pub gold: Option<PathBuf>,
    pub out_dir: PathBuf,
}

pub fn resolve(config: &PipelineConfig, base_dir: &Path) -> Result<ResolvedPaths> {
    let join = |s: &str| -> PathBuf {
        let p = Path::new(s);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base_dir.join(p)
        }
    };
    let resources = join(&config.resources);
    let paths = ResolvedPaths {
        input: join(&config.input),
        abbrev: resources.join("abbrev.tsv"),
        lexicon: resources.join("lexicon.tsv"),
        stopwords: resources.join("stopwords.txt"),
        termbank: resources.join("termbank.tsv"),
        gold: config.gold.as_deref().map(join),
        out_dir: join(&config.out_dir),
    };
    for (name, path) in [
        ("input", &paths.input),
        ("resources/abbrev.tsv", &paths.abbrev),
        ("resources/lexicon.tsv", &paths.lexicon),
        ("resources/stopwords.txt", &paths.stopwords),
        ("resources/termbank.tsv", &paths.termbank),
    ] {
        if !path.exists() {
            return Err(Error::InvalidParam(format!(
                "config references missing {name}: {}",
                path.display()
            )));
        }
    }
    if let Some(gold) = &paths.gold {
        if !gold.exists() {
            return Err(Error::InvalidParam(format!(
                "config references missing gold file: {}",
                gold.display()
            )));
        }
    }
    Ok(paths)
}

/// Run the whole pipeline. Any stage error aborts with a stage-named message
/// and removes artifacts written so far.
pub fn run_pipeline(
    config: &PipelineConfig,
    base_dir: &Path,
    options: &RunOptions,
) -> Result<PipelineOutcome> {
    let paths = resolve(config, base_dir)?;
    std::fs::create_dir_all(&paths.out_dir).map_err(|e| Error::io(&paths.out_dir, e))?;

    let mut written: Vec<PathBuf> = Vec::new();
    let result = if options.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| Error::InvalidParam(format!("thread pool: {e}")))?;
        pool.install(|| run_stages(config, &paths, options, &mut written))
    } else {
        run_stages(config, &paths, options, &mut written)
    };
    match result {
        Ok(outcome) => Ok(outcome),
        Err(err) => {
            for path in written {
                let _ = std::fs::remove_file(path);
            }
            Err(err)
        }
    }
}

fn log_stage(options: &RunOptions, stage: &str) {
    if !options.quiet {
        eprintln!("[logmaint] stage {stage}");
    }
}

fn write_artifact(path: &Path, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    written.push(path.to_path_buf());
    Ok(())
}

fn run_stages(
    config: &PipelineConfig,
    paths: &ResolvedPaths,
    options: &RunOptions,
    written: &mut Vec<PathBuf>,
) -> Result<PipelineOutcome> {
    // ingest
    log_stage(options, "ingest");
    let mapping = ColumnMapping {
        id: config.id_col.clone(),
        issue: config.issue_col.clone(),
        date: config.date_col.clone(),
        action: config.action_col.clone(),
    };
    let corpus = crate::corpus::load_corpus(&paths.input, &mapping, config.text_field)
        .map_err(|e| e.in_stage("ingest"))?;
    let resources = crate::resources::load_resources(
        Some(&paths.abbrev),
        Some(&paths.lexicon),
        Some(&paths.stopwords),
        Some(&paths.termbank),
    )
    .map_err(|e| e.in_stage("ingest"))?;

    // normalize … stem (the per-record chain runs inside preprocess_corpus)
    for stage in &STAGES[1..8] {
        log_stage(options, stage);
    }
    let documents = textnorm::preprocess_corpus(
        &corpus,
        &resources,
        &PreprocessOptions {
            max_edit_distance: config.max_edit_distance,
        },
    );
    let processed_path = paths.out_dir.join("processed.jsonl");
    let mut jsonl = String::new();
    for doc in &documents {
        jsonl.push_str(&serde_json::to_string(doc)?);
        jsonl.push('\n');
    }
    write_artifact(&processed_path, jsonl.as_bytes(), written)?;

    // vectorize
    log_stage(options, "vectorize");
    let (vocabulary, dtm) = vectorspace::build_tfidf_with(
        &documents,
        config.token_field,
        config.min_df,
        TfidfOptions {
            sublinear_tf: config.sublinear_tf,
        },
    )
    .map_err(|e| e.in_stage("vectorize"))?;

    // reduce
    log_stage(options, "reduce");
    let k_bound = dtm.weights.nrows().min(dtm.weights.ncols());
    let k = config.lsa_k.min(k_bound).max(1);
    let reduced =
        vectorspace::lsa_reduce(&dtm, k, config.seed).map_err(|e| e.in_stage("reduce"))?;
    let record_ids: Vec<String> = corpus.records().iter().map(|r| r.id.clone()).collect();
    let matrix_file = MatrixFile::new(
        record_ids.clone(),
        &vocabulary,
        &dtm,
        &reduced,
        config.token_field,
        config.min_df,
        config.seed,
    );
    let matrix_path = paths.out_dir.join("matrix.json");
    write_artifact(
        &matrix_path,
        crate::jsonfmt::to_string(&matrix_file)?.as_bytes(),
        written,
    )?;

    // cluster
    log_stage(options, "cluster");
    let (clustering, meta) =
        run_clustering(config, &matrix_file).map_err(|e| e.in_stage("cluster"))?;
    let clusters_path = paths.out_dir.join("clusters.csv");
    let mut csv = String::from("record_id,label\n");
    for (id, label) in record_ids.iter().zip(&clustering.labels) {
        csv.push_str(&format!("{id},{label}\n"));
    }
    write_artifact(&clusters_path, csv.as_bytes(), written)?;
    let meta_path = paths.out_dir.join("clusters.meta.json");
    write_artifact(
        &meta_path,
        crate::jsonfmt::to_string(&meta)?.as_bytes(),
        written,
    )?;

    // evaluate
    log_stage(options, "evaluate");
    let gold = paths
        .gold
        .as_deref()
        .map(|p| read_labels_csv(p, &record_ids))
        .transpose()
        .map_err(|e| e.in_stage("evaluate"))?;
    let report = evaluate(
        config,
        &documents,
        &matrix_file,
        &clustering,
        gold.as_deref(),
    )
    .map_err(|e| e.in_stage("evaluate"))?;
    let report_path = paths.out_dir.join("report.json");
    write_artifact(
        &report_path,
        crate::jsonfmt::to_string(&report)?.as_bytes(),
        written,
    )?;

    // manifest
    let mut inputs = BTreeMap::new();
    inputs.insert("input".to_string(), hash_file(&paths.input)?);
    inputs.insert("resources/abbrev.tsv".to_string(), hash_file(&paths.abbrev)?);
    inputs.insert("resources/lexicon.tsv".to_string(), hash_file(&paths.lexicon)?);
    inputs.insert(
        "resources/stopwords.txt".to_string(),
        hash_file(&paths.stopwords)?,
    );
    inputs.insert("resources/termbank.tsv".to_string(), hash_file(&paths.termbank)?);
    if let Some(gold_path) = &paths.gold {
        inputs.insert("gold".to_string(), hash_file(gold_path)?);
    }
    let manifest = Manifest {
        tool: "logmaint".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        inputs,
        stages: STAGES.iter().map(|s| s.to_string()).collect(),
    };
    let manifest_path = paths.out_dir.join("manifest.json");
    write_artifact(
        &manifest_path,
        crate::jsonfmt::to_string(&manifest)?.as_bytes(),
        written,
    )?;

    Ok(PipelineOutcome {
        processed: processed_path,
        matrix: matrix_path,
        clusters: clusters_path,
        clusters_meta: meta_path,
        report: report_path,
        manifest: manifest_path,
    })
}

/// Dispatch on the configured method. Returns the clustering plus the
/// sidecar metadata (with method-specific diagnostics).
pub fn run_clustering(
    config: &PipelineConfig,
    matrix: &MatrixFile,
) -> Result<(Clustering, ClustersMeta)> {
    let cc = &config.cluster;
    let space = cc.space;
    let points = matrix.space_matrix(space);
    let seed = config.seed;
    let (clustering, diagnostics) = match cc.method.as_str() {
        "kmeans" => {
            let out = clustering::kmeans(&points, cc.k, seed, cc.max_iter)?;
            let diag = Diagnostics {
                inertia_trace: Some(out.inertia_trace.clone()),
                ..Default::default()
            };
            (out.clustering, diag)
        }
        "dbscan" => {
            let eps = cc.eps.ok_or_else(|| {
                Error::InvalidParam("dbscan requires eps (no default)".into())
            })?;
            let min_pts = cc.min_pts.ok_or_else(|| {
                Error::InvalidParam("dbscan requires min_pts (no default)".into())
            })?;
            let clustering = clustering::dbscan(&points, eps, min_pts)?;
            let noise = clustering.labels.iter().filter(|&&l| l == -1).count();
            (
                clustering,
                Diagnostics {
                    noise_points: Some(noise),
                    ..Default::default()
                },
            )
        }
        "hier" => {
            let cut = match (cc.cut_count, cc.cut_threshold) {
                (Some(c), None) => Cut::Count(c),
                (None, Some(t)) => Cut::Threshold(t),
                (None, None) => Cut::Count(cc.k),
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidParam(
                        "hier: give either cut_count or cut_threshold, not both".into(),
                    ))
                }
            };
            let (dendrogram, clustering) = clustering::hierarchical(&points, cc.linkage, cut)?;
            (
                clustering,
                Diagnostics {
                    merges: Some(dendrogram.merges),
                    ..Default::default()
                },
            )
        }
        "lda" => {
            let counts = matrix.counts_matrix();
            let alpha = cc.alpha.unwrap_or(50.0 / cc.num_topics as f64);
            let model =
                clustering::lda(&counts, cc.num_topics, alpha, cc.beta, cc.iterations, seed)?;
            let labels = model.argmax_labels(&counts);
            let perplexity = evaluation::perplexity(&model, &counts)?;
            let clustering = Clustering {
                labels,
                centroids: None,
                method: "lda".into(),
                params: clustering::ClusterParams::Lda {
                    num_topics: cc.num_topics,
                    alpha,
                    beta: cc.beta,
                    iterations: cc.iterations,
                },
                seed,
            };
            (
                clustering,
                Diagnostics {
                    perplexity: Some(perplexity),
                    ..Default::default()
                },
            )
        }
        other => {
            return Err(Error::InvalidParam(format!(
                "unknown clustering method {other:?} (kmeans|dbscan|hier|lda)"
            )))
        }
    };
    let meta = ClustersMeta {
        method: clustering.method.clone(),
        params: clustering.params.clone(),
        seed,
        space,
        diagnostics,
    };
    Ok((clustering, meta))
}

/// Fit LDA again for metric computation when the report asks for
/// perplexity/coherence on an LDA clustering.
fn refit_lda(config: &PipelineConfig, matrix: &MatrixFile) -> Result<(TopicModel, crate::matrix::SparseMatrix)> {
    let cc = &config.cluster;
    let counts = matrix.counts_matrix();
    let alpha = cc.alpha.unwrap_or(50.0 / cc.num_topics as f64);
    let model = clustering::lda(&counts, cc.num_topics, alpha, cc.beta, cc.iterations, config.seed)?;
    Ok((model, counts))
}

/// Compute the configured metric list into an EvaluationReport.
pub fn evaluate(
    config: &PipelineConfig,
    documents: &[ProcessedDocument],
    matrix: &MatrixFile,
    clustering: &Clustering,
    gold: Option<&[i32]>,
) -> Result<EvaluationReport> {
    let points = matrix.space_matrix(config.cluster.space);
    let mut metrics = BTreeMap::new();
    let mut per_cluster = BTreeMap::new();
    let mut inter_matrix = Vec::new();
    let mut intra_inter_seen = false;

    for metric in &config.metrics {
        match metric.as_str() {
            "silhouette" => {
                let s = evaluation::silhouette(&points, &clustering.labels)?;
                metrics.insert("silhouette".to_string(), s.mean);
            }
            "inertia" => {
                let value = evaluation::inertia(&points, clustering)?;
                metrics.insert("inertia".to_string(), value);
            }
            "perplexity" => {
                if config.cluster.method != "lda" {
                    return Err(Error::InvalidParam(
                        "perplexity metric needs method = lda".into(),
                    ));
                }
                let (model, counts) = refit_lda(config, matrix)?;
                metrics.insert(
                    "perplexity".to_string(),
                    evaluation::perplexity(&model, &counts)?,
                );
            }
            "coherence" => {
                if config.cluster.method != "lda" {
                    return Err(Error::InvalidParam(
                        "coherence metric needs method = lda".into(),
                    ));
                }
                let (model, counts) = refit_lda(config, matrix)?;
                metrics.insert(
                    "coherence".to_string(),
                    evaluation::coherence(&model, &counts, 10.min(matrix.terms).max(2))?,
                );
            }
            name if name.starts_with("intra-inter:") => {
                if intra_inter_seen {
                    return Err(Error::InvalidParam(
                        "at most one intra-inter metric per report".into(),
                    ));
                }
                intra_inter_seen = true;
                let sim: SimilarityMetric = name["intra-inter:".len()..].parse()?;
                let texts: Vec<String> = documents
                    .iter()
                    .map(|d| d.field_tokens(config.token_field).join(" "))
                    .collect();
                let dtm = DocumentTermMatrix {
                    weights: matrix.tfidf_matrix(),
                    counts: matrix.counts_matrix(),
                };
                let report = evaluation::cluster_similarity_report(
                    &evaluation::DocumentRepresentation {
                        texts: &texts,
                        vectors: Some(&dtm),
                    },
                    &clustering.labels,
                    sim,
                )?;
                per_cluster = report.per_cluster;
                inter_matrix = report.inter;
            }
            other => return Err(Error::UnknownMetric(other.to_string())),
        }
    }

    let gold_comparison = gold
        .map(|g| evaluation::compare_to_gold(&clustering.labels, g))
        .transpose()?;
    Ok(EvaluationReport {
        method: clustering.method.clone(),
        metrics,
        per_cluster,
        inter_matrix,
        gold: gold_comparison,
    })
}

/// Read a `record_id,label` CSV (header optional) ordered like `record_ids`.
pub fn read_labels_csv(path: &Path, record_ids: &[String]) -> Result<Vec<i32>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut by_id: BTreeMap<String, i32> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line == "record_id,label") {
            continue;
        }
        let (id, label) = line.split_once(',').ok_or_else(|| Error::MalformedLine {
            path: path.into(),
            line: i + 1,
            reason: "expected record_id,label".into(),
        })?;
        let label: i32 = label.trim().parse().map_err(|_| Error::MalformedLine {
            path: path.into(),
            line: i + 1,
            reason: format!("label {label:?} is not an integer"),
        })?;
        by_id.insert(id.trim().to_string(), label);
    }
    record_ids
        .iter()
        .map(|id| {
            by_id.get(id).copied().ok_or_else(|| {
                Error::InvalidParam(format!("labels file {} misses record {id}", path.display()))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_config() -> PipelineConfig {
        PipelineConfig {
            input: "corpus.csv".into(),
            id_col: "ID".into(),
            issue_col: "Issue".into(),
            date_col: Some("Date".into()),
            action_col: Some("Action".into()),
            text_field: TextField::Both,
            resources: "resources".into(),
            min_df: 2,
            lsa_k: 3,
            cluster: ClusterConfig {
                method: "kmeans".into(),
                k: 2,
                ..Default::default()
            },
            out_dir: "out".into(),
            ..Default::default()
        }
    }

    fn materialized() -> (tempfile::TempDir, PipelineConfig) {
        let dir = tempfile::tempdir().unwrap();
        crate::fixture::materialize(dir.path()).unwrap();
        (dir, fixture_config())
    }

    #[test]
    fn fixture_pipeline_produces_all_artifacts() {
        let (dir, config) = materialized();
        let outcome =
            run_pipeline(&config, dir.path(), &RunOptions { threads: 0, quiet: true }).unwrap();
        for path in outcome.paths() {
            assert!(path.exists(), "missing artifact {}", path.display());
        }
        let report: EvaluationReport =
            serde_json::from_str(&std::fs::read_to_string(&outcome.report).unwrap()).unwrap();
        assert_eq!(report.method, "kmeans");
        assert!(report.metrics.contains_key("silhouette"));
    }

    #[test]
    fn missing_resource_file_is_named_in_error() {
        let (dir, config) = materialized();
        std::fs::remove_file(dir.path().join("resources/termbank.tsv")).unwrap();
        let err = run_pipeline(&config, dir.path(), &RunOptions { threads: 0, quiet: true })
            .unwrap_err();
        assert!(err.to_string().contains("termbank.tsv"), "{err}");
    }

    #[test]
    fn two_runs_are_byte_identical() {
        let (dir, mut config) = materialized();
        let first = run_pipeline(&config, dir.path(), &RunOptions { threads: 1, quiet: true })
            .unwrap();
        let bytes_a: Vec<Vec<u8>> = first
            .paths()
            .iter()
            .map(|p| std::fs::read(p).unwrap())
            .collect();
        config.out_dir = "out2".into();
        let second = run_pipeline(&config, dir.path(), &RunOptions { threads: 4, quiet: true })
            .unwrap();
        // manifest differs in out_dir, so compare the four data artifacts
        for (a, b) in first.paths().iter().zip(second.paths().iter()).take(5) {
            assert_eq!(
                std::fs::read(a).unwrap(),
                std::fs::read(b).unwrap(),
                "artifact {} differs",
                a.display()
            );
        }
        let _ = bytes_a;
    }

    #[test]
    fn stage_error_removes_partial_artifacts() {
        let (dir, mut config) = materialized();
        // min_df high enough to prune everything -> vectorize stage fails
        config.min_df = 100;
        let err = run_pipeline(&config, dir.path(), &RunOptions { threads: 0, quiet: true })
            .unwrap_err();
        assert!(err.to_string().contains("vectorize"), "{err}");
        let out = dir.path().join("out");
        assert!(
            !out.join("processed.jsonl").exists(),
            "partial artifact left behind"
        );
    }

    #[test]
    fn dbscan_requires_explicit_params() {
        let (dir, mut config) = materialized();
        config.cluster.method = "dbscan".into();
        let err = run_pipeline(&config, dir.path(), &RunOptions { threads: 0, quiet: true })
            .unwrap_err();
        assert!(err.to_string().contains("eps"), "{err}");
    }

    #[test]
    fn labels_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gold.csv");
        std::fs::write(&path, "record_id,label\nb,1\na,0\n").unwrap();
        let ids = vec!["a".to_string(), "b".to_string()];
        assert_eq!(read_labels_csv(&path, &ids).unwrap(), vec![0, 1]);
    }
}
