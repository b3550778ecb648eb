//! Levenshtein-distance spelling correction against a domain dictionary,
//! exact-match abbreviation expansion, and the corrector evaluation harness.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resources::{AbbreviationDictionary, MorphLexicon, TermBank};

/// Tokens this short are never spell-corrected (only abbreviation-expanded);
/// nearest-neighbor matches on them are degenerate.
pub const MIN_CORRECTABLE_LEN: usize = 3;

/// Minimum number of single-character insertions, deletions, and
/// substitutions transforming `a` into `b`.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Set of valid domain words with corpus frequencies for tie-breaking.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DomainDictionary {
    words: BTreeSet<String>,
    frequency: BTreeMap<String, u64>,
}

impl DomainDictionary {
    pub fn from_words<I: IntoIterator<Item = S>, S: AsRef<str>>(words: I) -> DomainDictionary {
        DomainDictionary {
            words: words
                .into_iter()
                .map(|w| w.as_ref().to_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
            frequency: BTreeMap::new(),
        }
    }

    /// Assemble the dictionary the corrector searches: lexicon tokens, the
    /// individual words of term-bank terms, and an optional explicit word
    /// list.
    pub fn from_resources(
        lexicon: &MorphLexicon,
        termbank: &TermBank,
        wordlist: &[String],
    ) -> DomainDictionary {
        let mut words: BTreeSet<String> = lexicon.tokens().map(String::from).collect();
        for entry in termbank.entries() {
            for word in entry.term.split_whitespace() {
                words.insert(word.to_string());
            }
        }
        for word in wordlist {
            let word = word.to_lowercase();
            if !word.is_empty() {
                words.insert(word);
            }
        }
        DomainDictionary {
            words,
            frequency: BTreeMap::new(),
        }
    }

    /// Count dictionary-word occurrences over a token stream; used only to
    /// break ties between equally distant candidates.
    pub fn count_frequencies<'a, I: IntoIterator<Item = &'a str>>(&mut self, tokens: I) {
        for token in tokens {
            if self.words.contains(token) {
                *self.frequency.entry(token.to_string()).or_insert(0) += 1;
            }
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn frequency(&self, word: &str) -> u64 {
        self.frequency.get(word).copied().unwrap_or(0)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrectionSource {
    Abbreviation,
    Spelling,
    Unchanged,
}

impl CorrectionSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            CorrectionSource::Abbreviation => "abbreviation",
            CorrectionSource::Spelling => "spelling",
            CorrectionSource::Unchanged => "unchanged",
        }
    }
}

/// Outcome of looking one token up. `distance` is zero exactly for
/// abbreviation hits and unchanged tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correction {
    pub original: String,
    pub replacement: String,
    pub distance: usize,
    pub source: CorrectionSource,
    /// True when no dictionary word was within the allowed distance.
    pub unresolvable: bool,
}

/// Exact-match abbreviation lookup; never fuzzy.
pub fn expand_abbreviation<'a>(
    token: &str,
    abbrevs: &'a AbbreviationDictionary,
) -> Option<&'a str> {
    abbrevs.get(token)
}

/// Correct one token against the dictionary.
///
/// Dictionary members come back unchanged. Otherwise the nearest dictionary
/// word within `max_distance` wins; ties break by higher corpus frequency,
/// then lexicographic order.
pub fn correct_token(token: &str, dict: &DomainDictionary, max_distance: usize) -> Correction {
    let unchanged = |unresolvable: bool| Correction {
        original: token.to_string(),
        replacement: token.to_string(),
        distance: 0,
        source: CorrectionSource::Unchanged,
        unresolvable,
    };
    if dict.contains(token) || token.chars().count() < MIN_CORRECTABLE_LEN {
        return unchanged(false);
    }
    // words() iterates in lexicographic order, so on equal (distance,
    // frequency) the first candidate seen is the lexicographic winner.
    let mut best: Option<(usize, u64, &str)> = None;
    for word in dict.words() {
        let d = levenshtein(token, word);
        let f = dict.frequency(word);
        let better = match best {
            None => true,
            Some((bd, bf, _)) => d < bd || (d == bd && f > bf),
        };
        if better {
            best = Some((d, f, word));
        }
    }
    match best {
        Some((d, _, word)) if d <= max_distance => Correction {
            original: token.to_string(),
            replacement: word.to_string(),
            distance: d,
            source: CorrectionSource::Spelling,
            unresolvable: false,
        },
        Some(_) => unchanged(true),
        None => unchanged(true),
    }
}

/// Aggregate result of scoring a corrector on (nonstandard, gold) pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectorEvaluation {
    /// Number of source documents the pairs were mined from; zero when the
    /// caller did not supply it.
    pub total_documents: usize,
    pub total_unique_tokens: usize,
    pub total_nonstandard: usize,
    pub corrected_correctly: usize,
    pub success_rate: f64,
}

/// Score any corrector (ours or an external tool wired in by the caller)
/// against gold corrections. Success means exact equality with the gold
/// token.
pub fn evaluate_corrector<F>(pairs: &[(String, String)], mut corrector: F) -> Result<CorrectorEvaluation>
where
    F: FnMut(&str) -> String,
{
    if pairs.is_empty() {
        return Err(Error::InvalidParam("empty pair list".into()));
    }
    let unique: BTreeSet<&str> = pairs.iter().map(|(n, _)| n.as_str()).collect();
    let corrected_correctly = pairs
        .iter()
        .filter(|(nonstandard, gold)| corrector(nonstandard) == *gold)
        .count();
    Ok(CorrectorEvaluation {
        total_documents: 0,
        total_unique_tokens: unique.len(),
        total_nonstandard: pairs.len(),
        corrected_correctly,
        success_rate: corrected_correctly as f64 / pairs.len() as f64,
    })
}

/// Parse an evaluation pairs file: `nonstandard<TAB>gold`, one per line.
pub fn load_pairs(path: &std::path::Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(n), Some(g), None) if !n.trim().is_empty() && !g.trim().is_empty() => {
                pairs.push((n.trim().to_lowercase(), g.trim().to_lowercase()));
            }
            _ => {
                return Err(Error::MalformedLine {
                    path: path.into(),
                    line: i + 1,
                    reason: "expected nonstandard<TAB>gold".into(),
                })
            }
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levenshtein_identity() {
        assert_eq!(levenshtein("seal", "seal"), 0);
    }

    #[test]
    fn levenshtein_insertions_only() {
        assert_eq!(levenshtein("", "abc"), 3);
        assert_eq!(levenshtein("abc", ""), 3);
    }

    #[test]
    fn levenshtein_transposed_pair_costs_two() {
        assert_eq!(levenshtein("egnine", "engine"), 2);
    }

    fn dict() -> DomainDictionary {
        let mut d = DomainDictionary::from_words(["seal", "seeds", "screw"]);
        d.count_frequencies(
            std::iter::repeat("seal")
                .take(5)
                .chain(std::iter::repeat("seeds").take(2))
                .chain(std::iter::repeat("screw").take(9)),
        );
        d
    }

    #[test]
    fn corrects_to_nearest_dictionary_word() {
        let c = correct_token("seeal", &dict(), 2);
        assert_eq!(c.replacement, "seal");
        assert_eq!(c.distance, 1);
        assert_eq!(c.source, CorrectionSource::Spelling);
        assert!(!c.unresolvable);
    }

    #[test]
    fn dictionary_member_is_unchanged() {
        let c = correct_token("seal", &dict(), 2);
        assert_eq!(c.replacement, "seal");
        assert_eq!(c.distance, 0);
        assert_eq!(c.source, CorrectionSource::Unchanged);
    }

    #[test]
    fn far_token_is_flagged_unresolvable() {
        let c = correct_token("xyzzy", &dict(), 2);
        assert_eq!(c.replacement, "xyzzy");
        assert_eq!(c.source, CorrectionSource::Unchanged);
        assert!(c.unresolvable);
    }

    #[test]
    fn short_tokens_are_never_corrected() {
        let c = correct_token("se", &dict(), 2);
        assert_eq!(c.source, CorrectionSource::Unchanged);
        assert!(!c.unresolvable);
    }

    #[test]
    fn ties_break_by_frequency_then_lexicographic() {
        // "bad" and "bap" are both one edit from "bat".
        let d = DomainDictionary::from_words(["bad", "bap"]);
        let c = correct_token("bat", &d, 2);
        assert_eq!(c.replacement, "bad"); // freq equal -> lexicographic
        let mut d2 = DomainDictionary::from_words(["bad", "bap"]);
        d2.count_frequencies(["bap", "bap"]);
        let c2 = correct_token("bat", &d2, 2);
        assert_eq!(c2.replacement, "bap"); // higher frequency wins
    }

    #[test]
    fn abbreviation_lookup_is_exact_only() {
        let mut abbrevs = AbbreviationDictionary::default();
        abbrevs.insert("fwd", "forward").unwrap();
        abbrevs.insert("eng", "engine").unwrap();
        assert_eq!(expand_abbreviation("fwd", &abbrevs), Some("forward"));
        assert_eq!(expand_abbreviation("eng", &abbrevs), Some("engine"));
        assert_eq!(expand_abbreviation("forward", &abbrevs), None);
    }

    #[test]
    fn perfect_corrector_scores_one() {
        let pairs: Vec<(String, String)> = vec![
            ("seeal".into(), "seal".into()),
            ("screwe".into(), "screw".into()),
        ];
        let eval = evaluate_corrector(&pairs, |t| correct_token(t, &dict(), 2).replacement).unwrap();
        assert_eq!(eval.success_rate, 1.0);
        assert_eq!(eval.total_nonstandard, 2);
        assert_eq!(eval.total_unique_tokens, 2);
    }

    #[test]
    fn success_rate_is_exact_fraction() {
        let pairs: Vec<(String, String)> = (0..97)
            .map(|i| (format!("tok{i}"), format!("gold{i}")))
            .collect();
        // corrector matching the first 94 only
        let eval = evaluate_corrector(&pairs, |t| {
            let i: usize = t[3..].parse().unwrap();
            if i < 94 {
                format!("gold{i}")
            } else {
                t.to_string()
            }
        })
        .unwrap();
        assert_eq!(eval.corrected_correctly, 94);
        assert!((eval.success_rate - 94.0 / 97.0).abs() < 1e-15);
        assert!((eval.success_rate - 0.969).abs() < 1e-3);
    }

    #[test]
    fn identity_corrector_on_identical_pairs() {
        let pairs: Vec<(String, String)> = vec![("seal".into(), "seal".into())];
        let eval = evaluate_corrector(&pairs, |t| t.to_string()).unwrap();
        assert_eq!(eval.success_rate, 1.0);
    }

    #[test]
    fn empty_pairs_is_an_error() {
        assert!(evaluate_corrector(&[], |t: &str| t.to_string()).is_err());
    }
}
