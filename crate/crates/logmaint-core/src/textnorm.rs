//! Deterministic text normalization: lowercasing, punctuation-aware
//! tokenization, stop-word removal, lexicon-backed POS tagging,
//! exception-aware lemmatization, and stemming.
//!
//! The per-record pipeline runs the stages in a fixed order:
//! normalize → abbreviation expansion → spelling correction →
//! stop-word removal → POS tag → lemmatize → stem.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::resources::{MorphLexicon, PosTag, ResourceBundle, StopWordList};
use crate::spellcorrect::{correct_token, expand_abbreviation, DomainDictionary};
use crate::stemmer;

/// Characters kept inside tokens: `/` and `'` join token parts ("l/h"),
/// `#` marks part numbers ("#3"). Everything else non-alphanumeric
/// separates tokens.
fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '/' | '#' | '\'')
}

/// Lowercase and split `raw` into tokens.
///
/// Punctuation and special characters act as separators and are stripped.
/// `/` and `'` survive only between token characters; `#` survives anywhere.
/// Tokens without at least one alphanumeric character are dropped, so the
/// output never contains empty tokens.
pub fn normalize_tokenize(raw: &str) -> Vec<String> {
    let lowered = raw.to_lowercase();
    lowered
        .split(|c: char| !is_token_char(c))
        .filter_map(|piece| {
            let token = piece.trim_matches(|c| c == '/' || c == '\'');
            if token.chars().any(char::is_alphanumeric) {
                Some(token.to_string())
            } else {
                None
            }
        })
        .collect()
}

/// Drop stop-listed tokens, preserving order; returns survivors and the
/// removed count.
pub fn remove_stopwords(tokens: &[String], stopwords: &StopWordList) -> (Vec<String>, usize) {
    let kept: Vec<String> = tokens
        .iter()
        .filter(|t| !stopwords.contains(t))
        .cloned()
        .collect();
    let removed = tokens.len() - kept.len();
    (kept, removed)
}

/// POS for one normalized token: lexicon lookup first, then suffix
/// heuristics (-ed/-ing → VERB, -ly → ADV), defaulting to NOUN.
pub fn pos_tag_token(token: &str, lexicon: &MorphLexicon) -> PosTag {
    if let Some(entry) = lexicon.get(token) {
        return entry.pos;
    }
    if token.ends_with("ed") || token.ends_with("ing") {
        PosTag::Verb
    } else if token.ends_with("ly") {
        PosTag::Adv
    } else {
        PosTag::Noun
    }
}

/// Tag a token sequence.
pub fn pos_tag(tokens: &[String], lexicon: &MorphLexicon) -> Vec<(String, PosTag)> {
    tokens
        .iter()
        .map(|t| (t.clone(), pos_tag_token(t, lexicon)))
        .collect()
}

/// Lemmatize one token.
///
/// Lexicon exceptions are returned verbatim (never mapped, so "left" cannot
/// become "leave"); other lexicon entries supply their lemma; everything
/// else goes through rule-based suffix stripping for the given POS.
pub fn lemmatize(token: &str, pos: PosTag, lexicon: &MorphLexicon) -> String {
    if let Some(entry) = lexicon.get(token) {
        if entry.is_exception {
            return token.to_string();
        }
        return entry.lemma.clone();
    }
    match pos {
        PosTag::Verb => lemmatize_verb(token),
        PosTag::Noun => strip_plural(token),
        _ => token.to_string(),
    }
}

/// Rule-based verb lemmatization: -ed/-ing/-s stripping with e-restoration
/// and consonant-doubling undo.
fn lemmatize_verb(token: &str) -> String {
    let n = token.len();
    if let Some(base) = token.strip_suffix("ied") {
        if n >= 4 {
            return format!("{base}y");
        }
    }
    if token.ends_with("eed") {
        // agreed -> agree; feed stays
        if n > 4 {
            return token[..n - 1].to_string();
        }
        return token.to_string();
    }
    if let Some(base) = token.strip_suffix("ed") {
        if base.contains(|c: char| "aeiouy".contains(c)) {
            return fix_stripped_verb(base);
        }
        return token.to_string();
    }
    if let Some(base) = token.strip_suffix("ing") {
        if base.contains(|c: char| "aeiouy".contains(c)) {
            return fix_stripped_verb(base);
        }
        return token.to_string();
    }
    strip_plural(token)
}

/// After removing -ed/-ing: undo consonant doubling ("stopped" → "stop")
/// and restore a final e where the remaining base demands one
/// ("replac" → "replace", "us" → "use").
fn fix_stripped_verb(base: &str) -> String {
    let bytes = base.as_bytes();
    let n = bytes.len();
    if n >= 2 && bytes[n - 1] == bytes[n - 2] {
        let doubled = matches!(
            bytes[n - 1],
            b'b' | b'd' | b'g' | b'm' | b'n' | b'p' | b'r' | b't'
        );
        if doubled {
            return base[..n - 1].to_string();
        }
    }
    if n <= 2 || matches!(bytes[n - 1], b'c' | b'v' | b'u' | b'z') {
        return format!("{base}e");
    }
    base.to_string()
}

/// Noun plural stripping: -ies → y, -es after sibilants, plain -s.
fn strip_plural(token: &str) -> String {
    let n = token.len();
    if let Some(base) = token.strip_suffix("ies") {
        if n > 4 {
            return format!("{base}y");
        }
    }
    if token.ends_with("ss") || token.ends_with("us") || token.ends_with("is") {
        return token.to_string();
    }
    for sib in ["ses", "xes", "zes", "ches", "shes"] {
        if token.ends_with(sib) {
            return token[..n - 2].to_string();
        }
    }
    if n > 2 && token.ends_with('s') {
        return token[..n - 1].to_string();
    }
    token.to_string()
}

/// Stem with the lexicon override: a lexicon stem wins over the algorithm.
pub fn stem_token(token: &str, lexicon: &MorphLexicon) -> String {
    if let Some(entry) = lexicon.get(token) {
        return entry.stem.clone();
    }
    stemmer::stem(token)
}

/// One token after the full stage chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenAnnotation {
    /// Token as produced by normalization (for abbreviation expansions,
    /// every expansion token keeps the abbreviation as its surface).
    pub surface: String,
    /// Token after abbreviation expansion / spelling correction.
    pub corrected: String,
    pub pos: PosTag,
    pub lemma: String,
    pub stem: String,
}

/// Per-record output of the preprocessing pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessedDocument {
    pub record_id: String,
    pub tokens: Vec<TokenAnnotation>,
    pub dropped_stopwords: usize,
    /// True when every token was removed; the document is kept so matrix
    /// rows stay aligned with corpus order.
    pub empty: bool,
}

impl ProcessedDocument {
    /// Tokens of the requested field, in order.
    pub fn field_tokens(&self, field: crate::vectorspace::TokenField) -> Vec<&str> {
        use crate::vectorspace::TokenField;
        self.tokens
            .iter()
            .map(|t| match field {
                TokenField::Surface => t.surface.as_str(),
                TokenField::Lemma => t.lemma.as_str(),
                TokenField::Stem => t.stem.as_str(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreprocessOptions {
    /// Maximum edit distance for spelling correction.
    pub max_edit_distance: usize,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        PreprocessOptions {
            max_edit_distance: 2,
        }
    }
}

/// Run the full preprocessing chain over a corpus.
///
/// Records are processed independently (and possibly concurrently) but
/// always assembled in corpus order, so the output is deterministic.
pub fn preprocess_corpus(
    corpus: &Corpus,
    resources: &ResourceBundle,
    options: &PreprocessOptions,
) -> Vec<ProcessedDocument> {
    let mut dictionary =
        DomainDictionary::from_resources(&resources.lexicon, &resources.termbank, &[]);
    // Frequencies for tie-breaking come from the corpus itself, counted on
    // normalized (pre-correction) tokens.
    let normalized: Vec<Vec<String>> = corpus
        .records()
        .iter()
        .map(|r| normalize_tokenize(&corpus.text_of(r)))
        .collect();
    dictionary.count_frequencies(normalized.iter().flatten().map(String::as_str));

    corpus
        .records()
        .par_iter()
        .zip(normalized.par_iter())
        .map(|(record, tokens)| {
            process_record(
                &record.id,
                tokens,
                resources,
                &dictionary,
                options.max_edit_distance,
            )
        })
        .collect()
}

fn process_record(
    record_id: &str,
    tokens: &[String],
    resources: &ResourceBundle,
    dictionary: &DomainDictionary,
    max_edit_distance: usize,
) -> ProcessedDocument {
    // Stage: abbreviation expansion, then spelling correction. Expansion
    // comes first so an abbreviation is never "corrected" to a near-miss.
    let mut corrected: Vec<(String, String)> = Vec::with_capacity(tokens.len());
    for token in tokens {
        if let Some(expansion) = expand_abbreviation(token, &resources.abbreviations) {
            for word in expansion.split_whitespace() {
                corrected.push((token.clone(), word.to_string()));
            }
        } else {
            let c = correct_token(token, dictionary, max_edit_distance);
            corrected.push((token.clone(), c.replacement));
        }
    }

    // Stage: stop-word removal on the corrected form.
    let mut dropped = 0usize;
    let mut annotations = Vec::with_capacity(corrected.len());
    for (surface, word) in corrected {
        if resources.stopwords.contains(&word) {
            dropped += 1;
            continue;
        }
        // Stages: POS tag, lemmatize, stem.
        let pos = pos_tag_token(&word, &resources.lexicon);
        let lemma = lemmatize(&word, pos, &resources.lexicon);
        let stem = stem_token(&word, &resources.lexicon);
        annotations.push(TokenAnnotation {
            surface,
            corrected: word,
            pos,
            lemma,
            stem,
        });
    }
    let empty = annotations.is_empty();
    ProcessedDocument {
        record_id: record_id.to_string(),
        tokens: annotations,
        dropped_stopwords: dropped,
        empty,
    }
}
