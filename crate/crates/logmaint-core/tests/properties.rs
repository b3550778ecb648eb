//! Property tests for the spec'd invariants: metric axioms against
//! independent oracles, tokenizer idempotence, corrector fixed points,
//! matrix row norms, clustering determinism and order-independence, and
//! distribution row-stochasticity.

mod common;

use proptest::prelude::*;

use logmaint_core::clustering::{dbscan, hierarchical, kmeans, lda, Cut, Linkage, NOISE};
use logmaint_core::evaluation::{
    cluster_similarity_report, compare_to_gold, cosine_similarity, jaro_similarity,
    levenshtein_similarity, silhouette, DocumentRepresentation, SimilarityMetric,
};
use logmaint_core::matrix::{DenseMatrix, SparseMatrix};
use logmaint_core::spellcorrect::{correct_token, levenshtein, DomainDictionary};
use logmaint_core::stemmer::stem;
use logmaint_core::textnorm::normalize_tokenize;

fn short_ascii() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[a-d]{0,8}").unwrap()
}

fn word() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[a-z]{1,12}").unwrap()
}

proptest! {
    #[test]
    fn levenshtein_matches_oracle_and_metric_axioms(a in short_ascii(), b in short_ascii(), c in short_ascii()) {
        let d_ab = levenshtein(&a, &b);
        prop_assert_eq!(d_ab, common::levenshtein_oracle(&a, &b));
        prop_assert_eq!(d_ab, levenshtein(&b, &a));
        prop_assert_eq!(d_ab == 0, a == b);
        prop_assert!(d_ab <= levenshtein(&a, &c) + levenshtein(&c, &b));
    }

    #[test]
    fn levenshtein_agrees_with_strsim(a in word(), b in word()) {
        prop_assert_eq!(levenshtein(&a, &b), strsim::levenshtein(&a, &b));
    }

    #[test]
    fn jaro_matches_oracles_and_stays_in_range(a in word(), b in word()) {
        let ours = jaro_similarity(&a, &b);
        prop_assert!((ours - common::jaro_oracle(&a, &b)).abs() < 1e-12);
        prop_assert!((ours - strsim::jaro(&a, &b)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&ours));
        prop_assert!((ours - jaro_similarity(&b, &a)).abs() == 0.0);
    }

    #[test]
    fn levenshtein_similarity_symmetric_in_range(a in short_ascii(), b in short_ascii()) {
        let s = levenshtein_similarity(&a, &b);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(s, levenshtein_similarity(&b, &a));
    }

    #[test]
    fn cosine_matches_oracle(a in proptest::collection::vec(0.0f64..10.0, 1..6), b in proptest::collection::vec(0.0f64..10.0, 1..6)) {
        let n = a.len().min(b.len());
        let s = cosine_similarity(&a[..n], &b[..n]);
        prop_assert!((s - common::cosine_oracle(&a[..n], &b[..n])).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&s));
    }

    #[test]
    fn stemmer_agrees_with_reference(word in "[a-z]{1,12}(ing|ed|ly|s|ation|ness|ies|ment|ous|ful|ive|ize|al|er|abli|anci)?") {
        let reference = rust_stemmers::Stemmer::create(rust_stemmers::Algorithm::English);
        prop_assert_eq!(stem(&word), reference.stem(&word).to_string());
    }

    #[test]
    fn tokenizer_idempotent_and_clean(raw in ".{0,60}") {
        let once = normalize_tokenize(&raw);
        let twice = normalize_tokenize(&once.join(" "));
        prop_assert_eq!(&once, &twice);
        for token in &once {
            prop_assert!(!token.is_empty());
            prop_assert!(!token.chars().any(char::is_uppercase));
            prop_assert!(token.chars().any(char::is_alphanumeric));
        }
    }

    #[test]
    fn dictionary_words_are_fixed_points(words in proptest::collection::btree_set("[a-z]{3,8}", 1..12)) {
        let dict = DomainDictionary::from_words(words.iter());
        for w in &words {
            let c = correct_token(w, &dict, 2);
            prop_assert_eq!(&c.replacement, w);
            prop_assert_eq!(c.distance, 0);
        }
    }

    #[test]
    fn corrections_stay_inside_the_dictionary(token in "[a-z]{3,8}", words in proptest::collection::btree_set("[a-z]{3,8}", 1..12)) {
        let dict = DomainDictionary::from_words(words.iter());
        let c = correct_token(&token, &dict, 2);
        match c.source {
            logmaint_core::spellcorrect::CorrectionSource::Spelling => {
                prop_assert!(dict.contains(&c.replacement));
            }
            _ => prop_assert_eq!(&c.replacement, &token),
        }
    }
}

/// Single-edit perturbations whose unique nearest word is the source must
/// be recovered exactly.
#[test]
fn unique_nearest_single_edit_recovers() {
    let words = [
        "baffle", "seal", "screw", "engine", "cylinder", "gasket", "bracket", "rudder",
        "aileron", "manifold",
    ];
    let dict = DomainDictionary::from_words(words);
    let mut rng = common::XorShift(0xABCDEF12345);
    let alphabet: Vec<char> = ('a'..='z').collect();
    let mut checked = 0;
    while checked < 300 {
        let w = words[rng.below(words.len())];
        let mut chars: Vec<char> = w.chars().collect();
        match rng.below(3) {
            0 => {
                let i = rng.below(chars.len());
                chars[i] = alphabet[rng.below(26)];
            }
            1 => {
                let i = rng.below(chars.len() + 1);
                chars.insert(i, alphabet[rng.below(26)]);
            }
            _ => {
                let i = rng.below(chars.len());
                chars.remove(i);
            }
        }
        let perturbed: String = chars.iter().collect();
        if perturbed.chars().count() < 3 || dict.contains(&perturbed) {
            continue;
        }
        // keep only perturbations with a unique nearest neighbor = source
        let mut distances: Vec<(usize, &str)> =
            words.iter().map(|x| (levenshtein(&perturbed, x), *x)).collect();
        distances.sort();
        if distances[0].1 != w || distances[0].0 == distances[1].0 {
            continue;
        }
        let c = correct_token(&perturbed, &dict, 2);
        assert_eq!(c.replacement, w, "{perturbed} should correct to {w}");
        checked += 1;
    }
}

#[test]
fn correction_is_reproducible() {
    let dict = DomainDictionary::from_words(["seal", "seat", "sear"]);
    let first = correct_token("serl", &dict, 2);
    for _ in 0..10 {
        assert_eq!(correct_token("serl", &dict, 2), first);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tfidf_rows_are_unit_or_zero(docs in proptest::collection::vec(proptest::collection::vec("[a-e]", 0..10), 2..8)) {
        let documents: Vec<_> = docs
            .iter()
            .enumerate()
            .map(|(i, tokens)| {
                let toks: Vec<&str> = tokens.iter().map(String::as_str).collect();
                test_doc(&i.to_string(), &toks)
            })
            .collect();
        if let Ok((_, dtm)) = logmaint_core::vectorspace::build_tfidf(
            &documents,
            logmaint_core::vectorspace::TokenField::Lemma,
            1,
        ) {
            for norm in dtm.weights.row_norms() {
                prop_assert!(norm == 0.0 || (norm - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dbscan_is_order_independent(seed in 0u64..500) {
        let mut rng = common::XorShift(seed.wrapping_mul(0x9E3779B9).max(1));
        let n = 24 + rng.below(16);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let blob = rng.below(3) as f64;
                vec![blob * 10.0 + rng.next_f64(), blob * 5.0 + rng.next_f64()]
            })
            .collect();
        let forward = dbscan(&DenseMatrix::from_rows(&rows), 1.5, 3).unwrap();
        let mut reversed_rows = rows.clone();
        reversed_rows.reverse();
        let reversed = dbscan(&DenseMatrix::from_rows(&reversed_rows), 1.5, 3).unwrap();
        let undone: Vec<i32> = (0..n).map(|i| reversed.labels[n - 1 - i]).collect();
        prop_assert_eq!(canonicalize(&forward.labels), canonicalize(&undone));
    }

    #[test]
    fn hierarchical_merges_monotone(seed in 0u64..200) {
        let mut rng = common::XorShift(seed.wrapping_mul(0x2545F491).max(1));
        let n = 6 + rng.below(14);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.next_f64() * 10.0, rng.next_f64() * 10.0])
            .collect();
        let (dendrogram, _) =
            hierarchical(&DenseMatrix::from_rows(&rows), Linkage::Average, Cut::Count(1)).unwrap();
        for pair in dendrogram.merges.windows(2) {
            prop_assert!(pair[1].distance >= pair[0].distance - 1e-12);
        }
    }

    #[test]
    fn lda_rows_stochastic_and_deterministic(seed in 0u64..100) {
        let mut rng = common::XorShift(seed.wrapping_mul(0x6C8E9CF5).max(1));
        let vocab = 6;
        let rows: Vec<Vec<(usize, f64)>> = (0..8)
            .map(|_| {
                (0..vocab)
                    .filter_map(|w| {
                        let c = rng.below(4);
                        (c > 0).then_some((w, c as f64))
                    })
                    .collect()
            })
            .collect();
        let counts = SparseMatrix::from_rows(vocab, &rows);
        if counts.nnz() == 0 {
            return Ok(());
        }
        let a = lda(&counts, 3, 0.4, 0.02, 20, seed).unwrap();
        let b = lda(&counts, 3, 0.4, 0.02, 20, seed).unwrap();
        prop_assert_eq!(&a, &b);
        for t in 0..3 {
            let s: f64 = a.topic_word.row(t).iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-9);
        }
        for d in 0..8 {
            let s: f64 = a.doc_topic.row(d).iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn silhouette_stays_in_declared_range(seed in 0u64..200) {
        let mut rng = common::XorShift(seed.wrapping_mul(0xD1342543).max(1));
        let n = 6 + rng.below(20);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.next_f64() * 4.0, rng.next_f64() * 4.0])
            .collect();
        let labels: Vec<i32> = (0..n).map(|_| rng.below(3) as i32).collect();
        let distinct: std::collections::BTreeSet<i32> = labels.iter().copied().collect();
        if distinct.len() < 2 {
            return Ok(());
        }
        let s = silhouette(&DenseMatrix::from_rows(&rows), &labels).unwrap();
        prop_assert!((-1.0..=1.0).contains(&s.mean));
        for p in s.per_point.iter().flatten() {
            prop_assert!((-1.0..=1.0).contains(p));
        }
    }
}

fn test_doc(id: &str, tokens: &[&str]) -> logmaint_core::textnorm::ProcessedDocument {
    logmaint_core::textnorm::ProcessedDocument {
        record_id: id.to_string(),
        tokens: tokens
            .iter()
            .map(|t| logmaint_core::textnorm::TokenAnnotation {
                surface: t.to_string(),
                corrected: t.to_string(),
                pos: logmaint_core::resources::PosTag::Noun,
                lemma: t.to_string(),
                stem: t.to_string(),
            })
            .collect(),
        dropped_stopwords: 0,
        empty: tokens.is_empty(),
    }
}

fn canonicalize(labels: &[i32]) -> Vec<i32> {
    let mut map = std::collections::BTreeMap::new();
    let mut next = 0;
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

/// Same seed and inputs give identical serialized output for all four
/// methods.
#[test]
fn all_methods_are_deterministic() {
    let mut rng = common::XorShift(314159);
    let rows: Vec<Vec<f64>> = (0..30)
        .map(|i| {
            let blob = (i % 3) as f64;
            vec![blob * 12.0 + rng.next_f64(), blob * 7.0 + rng.next_f64()]
        })
        .collect();
    let points = DenseMatrix::from_rows(&rows);

    let k1 = kmeans(&points, 3, 42, 100).unwrap();
    let k2 = kmeans(&points, 3, 42, 100).unwrap();
    assert_eq!(
        serde_json::to_string(&k1.clustering).unwrap(),
        serde_json::to_string(&k2.clustering).unwrap()
    );

    let d1 = dbscan(&points, 2.0, 3).unwrap();
    let d2 = dbscan(&points, 2.0, 3).unwrap();
    assert_eq!(
        serde_json::to_string(&d1).unwrap(),
        serde_json::to_string(&d2).unwrap()
    );

    let h1 = hierarchical(&points, Linkage::Average, Cut::Count(3)).unwrap();
    let h2 = hierarchical(&points, Linkage::Average, Cut::Count(3)).unwrap();
    assert_eq!(
        serde_json::to_string(&h1.1).unwrap(),
        serde_json::to_string(&h2.1).unwrap()
    );

    let counts = SparseMatrix::from_rows(
        4,
        &(0..10)
            .map(|i| vec![(i % 4, 1.0 + (i % 3) as f64)])
            .collect::<Vec<_>>(),
    );
    let l1 = lda(&counts, 2, 0.5, 0.01, 40, 42).unwrap();
    let l2 = lda(&counts, 2, 0.5, 0.01, 40, 42).unwrap();
    assert_eq!(
        serde_json::to_string(&l1).unwrap(),
        serde_json::to_string(&l2).unwrap()
    );
}

/// Purity and ARI hit 1 exactly when the partitions agree up to renaming.
#[test]
fn gold_metrics_detect_identity_up_to_renaming() {
    let labels = vec![0, 0, 1, 1, 2, 2, 2];
    let renamed = vec![2, 2, 0, 0, 1, 1, 1];
    let g = compare_to_gold(&labels, &renamed).unwrap();
    assert_eq!((g.purity, g.adjusted_rand_index), (1.0, 1.0));

    let off_by_one = vec![0, 0, 1, 1, 2, 2, 0];
    let g = compare_to_gold(&labels, &off_by_one).unwrap();
    assert!(g.purity < 1.0 || g.adjusted_rand_index < 1.0);
    assert!(g.adjusted_rand_index < 1.0);
}

/// ARI is chance-corrected: random labelings score near zero.
#[test]
fn ari_near_zero_for_random_labels() {
    let gold: Vec<i32> = (0..100).map(|i| (i % 4) as i32).collect();
    let mut sum = 0.0;
    let seeds = 50;
    for seed in 0..seeds {
        let mut rng = common::XorShift(seed * 7919 + 13);
        let labels: Vec<i32> = (0..100).map(|_| rng.below(4) as i32).collect();
        sum += compare_to_gold(&labels, &gold).unwrap().adjusted_rand_index;
    }
    let mean = sum / seeds as f64;
    assert!(mean.abs() <= 0.1, "mean ARI over {seeds} seeds was {mean}");
}

/// The report must equal an all-pairs brute force on small inputs.
#[test]
fn similarity_report_matches_brute_force() {
    let mut rng = common::XorShift(271828);
    let vocab = ["seal", "leak", "screw", "baffle", "engine", "cylinder"];
    let n = 18;
    let texts: Vec<String> = (0..n)
        .map(|_| {
            let len = 1 + rng.below(5);
            (0..len)
                .map(|_| vocab[rng.below(vocab.len())])
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let labels: Vec<i32> = (0..n).map(|_| rng.below(3) as i32).collect();

    for metric in [SimilarityMetric::Levenshtein, SimilarityMetric::Jaro] {
        let report = cluster_similarity_report(
            &DocumentRepresentation {
                texts: &texts,
                vectors: None,
            },
            &labels,
            metric,
        )
        .unwrap();
        // brute force: bucket every unordered pair
        let pair_sim = |i: usize, j: usize| match metric {
            SimilarityMetric::Levenshtein => levenshtein_similarity(&texts[i], &texts[j]),
            SimilarityMetric::Jaro => jaro_similarity(&texts[i], &texts[j]),
            SimilarityMetric::Cosine => unreachable!(),
        };
        for (&label, stats) in &report.per_cluster {
            let members: Vec<usize> = (0..n).filter(|&i| labels[i] == label).collect();
            let expected = if members.len() < 2 {
                1.0
            } else {
                let mut sum = 0.0;
                let mut count = 0;
                for x in 0..members.len() {
                    for y in x + 1..members.len() {
                        sum += pair_sim(members[x], members[y]);
                        count += 1;
                    }
                }
                sum / count as f64
            };
            assert!(
                (stats.intra_similarity - expected).abs() < 1e-12,
                "intra mismatch for cluster {label}"
            );
        }
        for entry in &report.inter {
            let left: Vec<usize> = (0..n).filter(|&i| labels[i] == entry.a).collect();
            let right: Vec<usize> = (0..n).filter(|&i| labels[i] == entry.b).collect();
            let mut sum = 0.0;
            for &i in &left {
                for &j in &right {
                    sum += pair_sim(i, j);
                }
            }
            let expected = sum / (left.len() * right.len()) as f64;
            assert!(
                (entry.similarity - expected).abs() < 1e-12,
                "inter mismatch for ({}, {})",
                entry.a,
                entry.b
            );
        }
    }
}

/// Perplexity and coherence do not depend on topic index order.
#[test]
fn topic_metrics_invariant_under_topic_permutation() {
    let counts = SparseMatrix::from_rows(
        5,
        &(0..12)
            .map(|i| vec![(i % 5, 1.0 + (i % 2) as f64), ((i + 2) % 5, 1.0)])
            .map(|mut row: Vec<(usize, f64)>| {
                row.sort_by_key(|&(c, _)| c);
                row.dedup_by_key(|&mut (c, _)| c);
                row
            })
            .collect::<Vec<_>>(),
    );
    let model = lda(&counts, 3, 0.4, 0.02, 60, 17).unwrap();
    let permuted = {
        let mut m = model.clone();
        let order = [2usize, 0, 1];
        let mut tw = DenseMatrix::zeros(3, 5);
        for (new_t, &old_t) in order.iter().enumerate() {
            for w in 0..5 {
                tw.set(new_t, w, model.topic_word.get(old_t, w));
            }
        }
        let mut dt = DenseMatrix::zeros(model.doc_topic.nrows(), 3);
        for d in 0..model.doc_topic.nrows() {
            for (new_t, &old_t) in order.iter().enumerate() {
                dt.set(d, new_t, model.doc_topic.get(d, old_t));
            }
        }
        m.topic_word = tw;
        m.doc_topic = dt;
        m
    };
    let p1 = logmaint_core::evaluation::perplexity(&model, &counts).unwrap();
    let p2 = logmaint_core::evaluation::perplexity(&permuted, &counts).unwrap();
    assert!((p1 - p2).abs() < 1e-9);
    let c1 = logmaint_core::evaluation::coherence(&model, &counts, 3).unwrap();
    let c2 = logmaint_core::evaluation::coherence(&permuted, &counts, 3).unwrap();
    assert!((c1 - c2).abs() < 1e-9);
}
