//! Logbook corpus loading.
//!
//! A corpus is a CSV file (RFC 4180 quoting, header row required) with at
//! least an id column and an issue-text column. Rows whose issue text is
//! empty are skipped and counted; duplicate ids are an error.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One logbook entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub issue_text: String,
    /// ISO-8601 (`YYYY-MM-DD`) when the source date was parseable.
    pub date: Option<String>,
    pub action_text: Option<String>,
}

/// Which free-text field(s) feed the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TextField {
    #[default]
    Issue,
    Action,
    Both,
}

impl std::str::FromStr for TextField {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "issue" => Ok(TextField::Issue),
            "action" => Ok(TextField::Action),
            "both" => Ok(TextField::Both),
            other => Err(Error::InvalidParam(format!(
                "text field must be issue|action|both, got {other:?}"
            ))),
        }
    }
}

/// Ordered collection of records; order is file row order and never changes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Corpus {
    records: Vec<Record>,
    pub text_field: TextField,
    /// Rows dropped at load time because their issue text was empty.
    pub skipped_rows: usize,
}

impl Corpus {
    pub fn new(records: Vec<Record>, text_field: TextField) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::InvalidParam("corpus has no records".into()));
        }
        let mut seen = HashSet::new();
        for r in &records {
            if r.id.is_empty() {
                return Err(Error::InvalidParam("record with empty id".into()));
            }
            if r.issue_text.is_empty() {
                return Err(Error::InvalidParam(format!(
                    "record {} has empty issue text",
                    r.id
                )));
            }
            if !seen.insert(r.id.clone()) {
                return Err(Error::DuplicateId { id: r.id.clone() });
            }
        }
        Ok(Corpus {
            records,
            text_field,
            skipped_rows: 0,
        })
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The raw text selected by `text_field` (issue and action joined by a
    /// space for [`TextField::Both`]).
    pub fn text_of(&self, record: &Record) -> String {
        match self.text_field {
            TextField::Issue => record.issue_text.clone(),
            TextField::Action => record.action_text.clone().unwrap_or_default(),
            TextField::Both => match &record.action_text {
                Some(action) if !action.is_empty() => {
                    format!("{} {}", record.issue_text, action)
                }
                _ => record.issue_text.clone(),
            },
        }
    }
}

/// Maps logical record fields onto CSV header names.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColumnMapping {
    pub id: String,
    pub issue: String,
    pub date: Option<String>,
    pub action: Option<String>,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping {
            id: "id".into(),
            issue: "issue".into(),
            date: None,
            action: None,
        }
    }
}

/// Load a corpus from a CSV file, preserving row order.
pub fn load_corpus(path: &Path, mapping: &ColumnMapping, text_field: TextField) -> Result<Corpus> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(file);

    let headers = reader
        .headers()
        .map_err(|e| Error::Csv {
            path: path.into(),
            source: e,
        })?
        .clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn {
                path: path.into(),
                column: name.to_string(),
            })
    };
    let id_col = col(&mapping.id)?;
    let issue_col = col(&mapping.issue)?;
    let date_col = mapping.date.as_deref().map(col).transpose()?;
    let action_col = mapping.action.as_deref().map(col).transpose()?;

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut skipped = 0usize;
    for row in reader.records() {
        let row = row.map_err(|e| Error::Csv {
            path: path.into(),
            source: e,
        })?;
        let field = |i: usize| row.get(i).unwrap_or("").trim().to_string();
        let issue_text = field(issue_col);
        if issue_text.is_empty() {
            skipped += 1;
            continue;
        }
        let id = field(id_col);
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId { id });
        }
        let date = date_col.map(|i| field(i)).and_then(|raw| parse_date(&raw));
        let action_text = action_col.map(|i| field(i)).filter(|s| !s.is_empty());
        records.push(Record {
            id,
            issue_text,
            date,
            action_text,
        });
    }
    if records.is_empty() {
        return Err(Error::ZeroUsableRows { path: path.into() });
    }
    let mut corpus = Corpus::new(records, text_field)?;
    corpus.skipped_rows = skipped;
    Ok(corpus)
}

/// Normalize `YYYY-MM-DD` or `M/D/YYYY` to ISO-8601; anything else is dropped.
fn parse_date(raw: &str) -> Option<String> {
    let (y, m, d) = if raw.contains('/') {
        let mut it = raw.splitn(3, '/');
        let m: u32 = it.next()?.parse().ok()?;
        let d: u32 = it.next()?.parse().ok()?;
        let y: u32 = it.next()?.parse().ok()?;
        (y, m, d)
    } else {
        let mut it = raw.splitn(3, '-');
        let y: u32 = it.next()?.parse().ok()?;
        let m: u32 = it.next()?.parse().ok()?;
        let d: u32 = it.next()?.parse().ok()?;
        (y, m, d)
    };
    if !(1..=12).contains(&m) || !(1..=31).contains(&d) || y < 100 {
        return None;
    }
    Some(format!("{y:04}-{m:02}-{d:02}"))
}
