//! Domain language resources: abbreviation dictionary, morphosyntactic
//! lexicon, stop-word list, and term bank.
//!
//! All resource files are tab-separated UTF-8 with one entry per line
//! (stop words: one token per line, `#` comments allowed). Every token is
//! lowercased at load time, matching the pipeline's lowercasing stage.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed POS tagset: the corpus vocabulary is verbs, nouns, adverbs and
/// adjectives plus a catch-all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Other,
}

impl PosTag {
    pub fn parse(s: &str) -> Option<PosTag> {
        match s {
            "NOUN" => Some(PosTag::Noun),
            "VERB" => Some(PosTag::Verb),
            "ADJ" => Some(PosTag::Adj),
            "ADV" => Some(PosTag::Adv),
            "OTHER" => Some(PosTag::Other),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Other => "OTHER",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exact-match map from abbreviation to its (possibly multi-token) expansion.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbbreviationDictionary {
    entries: BTreeMap<String, String>,
}

impl AbbreviationDictionary {
    pub fn insert(&mut self, key: &str, expansion: &str) -> Result<()> {
        let key = key.to_lowercase();
        let expansion = expansion.to_lowercase();
        if key.is_empty() || expansion.is_empty() {
            return Err(Error::InvalidParam(
                "abbreviation key and expansion must be non-empty".into(),
            ));
        }
        if key.chars().any(char::is_whitespace) {
            return Err(Error::InvalidParam(format!(
                "abbreviation key {key:?} contains whitespace"
            )));
        }
        if self.entries.insert(key.clone(), expansion).is_some() {
            return Err(Error::InvalidParam(format!("duplicate abbreviation {key:?}")));
        }
        Ok(())
    }

    pub fn get(&self, token: &str) -> Option<&str> {
        self.entries.get(token).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

/// Per-token morphosyntactic record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub pos: PosTag,
    pub lemma: String,
    pub stem: String,
    /// Do-not-lemmatize flag for tokens like "left" that a verb
    /// lemmatizer would wrongly map to "leave".
    pub is_exception: bool,
}

/// Token → morphosyntactic record map.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphLexicon {
    entries: BTreeMap<String, LexiconEntry>,
}

impl MorphLexicon {
    pub fn insert(&mut self, token: &str, entry: LexiconEntry) -> Result<()> {
        let token = token.to_lowercase();
        if token.is_empty() || entry.lemma.is_empty() || entry.stem.is_empty() {
            return Err(Error::InvalidParam(
                "lexicon token, lemma and stem must be non-empty".into(),
            ));
        }
        if self.entries.insert(token.clone(), entry).is_some() {
            return Err(Error::InvalidParam(format!("duplicate lexicon token {token:?}")));
        }
        Ok(())
    }

    pub fn get(&self, token: &str) -> Option<&LexiconEntry> {
        self.entries.get(token)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &LexiconEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Set of tokens removed before vectorization.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopWordList {
    words: BTreeSet<String>,
}

impl StopWordList {
    pub fn from_words<I: IntoIterator<Item = S>, S: AsRef<str>>(words: I) -> StopWordList {
        StopWordList {
            words: words
                .into_iter()
                .map(|w| w.as_ref().to_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// Curated domain term with one example of real usage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry {
    pub term: String,
    pub sample_usage: String,
}

/// List of curated domain terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermBank {
    entries: Vec<TermEntry>,
}

impl TermBank {
    pub fn push(&mut self, term: &str, sample_usage: &str) -> Result<()> {
        let term = term.to_lowercase();
        if term.is_empty() {
            return Err(Error::InvalidParam("term bank term must be non-empty".into()));
        }
        if self.entries.iter().any(|e| e.term == term) {
            return Err(Error::InvalidParam(format!("duplicate term {term:?}")));
        }
        self.entries.push(TermEntry {
            term,
            sample_usage: sample_usage.to_lowercase(),
        });
        Ok(())
    }

    pub fn entries(&self) -> &[TermEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The four language resources used by the pipeline. Omitted resources are
/// empty and behave as no-ops.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ResourceBundle {
    pub abbreviations: AbbreviationDictionary,
    pub lexicon: MorphLexicon,
    pub stopwords: StopWordList,
    pub termbank: TermBank,
}

pub fn load_resources(
    abbrev_path: Option<&Path>,
    lexicon_path: Option<&Path>,
    stopword_path: Option<&Path>,
    termbank_path: Option<&Path>,
) -> Result<ResourceBundle> {
    Ok(ResourceBundle {
        abbreviations: abbrev_path.map(load_abbreviations).transpose()?.unwrap_or_default(),
        lexicon: lexicon_path.map(load_lexicon).transpose()?.unwrap_or_default(),
        stopwords: stopword_path.map(load_stopwords).transpose()?.unwrap_or_default(),
        termbank: termbank_path.map(load_termbank).transpose()?.unwrap_or_default(),
    })
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text.lines().map(String::from).collect())
}

/// Split a TSV line into exactly `n` fields.
fn tsv_fields<'a>(path: &Path, lineno: usize, line: &'a str, n: usize) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != n || fields.iter().any(|f| f.trim().is_empty()) {
        return Err(Error::MalformedLine {
            path: path.into(),
            line: lineno,
            reason: format!("expected {n} non-empty tab-separated fields"),
        });
    }
    Ok(fields)
}

/// `abbrev.tsv`: `abbreviation<TAB>expansion`.
pub fn load_abbreviations(path: &Path) -> Result<AbbreviationDictionary> {
    let mut dict = AbbreviationDictionary::default();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields = tsv_fields(path, lineno, line, 2)?;
        let key = fields[0].trim().to_lowercase();
        if key.chars().any(char::is_whitespace) {
            return Err(Error::MalformedLine {
                path: path.into(),
                line: lineno,
                reason: format!("abbreviation {key:?} contains whitespace"),
            });
        }
        if dict.get(&key).is_some() {
            return Err(Error::DuplicateKey {
                path: path.into(),
                line: lineno,
                key,
            });
        }
        dict.insert(&key, fields[1].trim())?;
    }
    Ok(dict)
}

/// `lexicon.tsv`: `token<TAB>pos<TAB>lemma<TAB>stem<TAB>exception(0|1)`.
pub fn load_lexicon(path: &Path) -> Result<MorphLexicon> {
    let mut lexicon = MorphLexicon::default();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields = tsv_fields(path, lineno, line, 5)?;
        let token = fields[0].trim().to_lowercase();
        let pos = PosTag::parse(fields[1].trim()).ok_or_else(|| Error::UnknownPosTag {
            path: path.into(),
            line: lineno,
            tag: fields[1].trim().to_string(),
        })?;
        let is_exception = match fields[4].trim() {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::MalformedLine {
                    path: path.into(),
                    line: lineno,
                    reason: format!("exception flag must be 0 or 1, got {other:?}"),
                })
            }
        };
        if lexicon.get(&token).is_some() {
            return Err(Error::DuplicateKey {
                path: path.into(),
                line: lineno,
                key: token,
            });
        }
        lexicon.insert(
            &token,
            LexiconEntry {
                pos,
                lemma: fields[2].trim().to_lowercase(),
                stem: fields[3].trim().to_lowercase(),
                is_exception,
            },
        )?;
    }
    Ok(lexicon)
}

/// `stopwords.txt`: one token per line, `#` starts a comment.
pub fn load_stopwords(path: &Path) -> Result<StopWordList> {
    let mut words = BTreeSet::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let lineno = i + 1;
        let token = match line.find('#') {
            Some(pos) => line[..pos].trim(),
            None => line.trim(),
        };
        if token.is_empty() {
            continue;
        }
        if token.chars().any(char::is_whitespace) {
            return Err(Error::MalformedLine {
                path: path.into(),
                line: lineno,
                reason: format!("stop word {token:?} contains whitespace"),
            });
        }
        if !words.insert(token.to_lowercase()) {
            return Err(Error::DuplicateKey {
                path: path.into(),
                line: lineno,
                key: token.to_lowercase(),
            });
        }
    }
    Ok(StopWordList { words })
}

/// `termbank.tsv`: `term<TAB>sample_usage`.
pub fn load_termbank(path: &Path) -> Result<TermBank> {
    let mut bank = TermBank::default();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields = tsv_fields(path, lineno, line, 2)?;
        let term = fields[0].trim().to_lowercase();
        if bank.entries.iter().any(|e| e.term == term) {
            return Err(Error::DuplicateKey {
                path: path.into(),
                line: lineno,
                key: term,
            });
        }
        bank.push(&term, fields[1].trim())?;
    }
    Ok(bank)
}

/// Serialize a resource back to its file format. Reloading the output
/// yields an identical structure.
pub fn save_abbreviations(dict: &AbbreviationDictionary) -> String {
    let mut out = String::new();
    for (k, v) in dict.iter() {
        out.push_str(&format!("{k}\t{v}\n"));
    }
    out
}

pub fn save_lexicon(lexicon: &MorphLexicon) -> String {
    let mut out = String::new();
    for (token, e) in lexicon.iter() {
        out.push_str(&format!(
            "{token}\t{}\t{}\t{}\t{}\n",
            e.pos,
            e.lemma,
            e.stem,
            if e.is_exception { "1" } else { "0" }
        ));
    }
    out
}

pub fn save_stopwords(list: &StopWordList) -> String {
    let mut out = String::new();
    for w in list.iter() {
        out.push_str(w);
        out.push('\n');
    }
    out
}

pub fn save_termbank(bank: &TermBank) -> String {
    let mut out = String::new();
    for e in bank.entries() {
        out.push_str(&format!("{}\t{}\n", e.term, e.sample_usage));
    }
    out
}
