//! Bundled miniature logbook fixture: a four-record aviation corpus plus
//! matching sample resources. Used by `logmaint selftest`, the test suites,
//! and as a template for preparing real data.

use std::path::{Path, PathBuf};

use crate::corpus::{ColumnMapping, Corpus, TextField};
use crate::error::{Error, Result};
use crate::resources::ResourceBundle;

pub const CORPUS_CSV: &str = include_str!("../fixtures/corpus.csv");
pub const ABBREV_TSV: &str = include_str!("../fixtures/resources/abbrev.tsv");
pub const LEXICON_TSV: &str = include_str!("../fixtures/resources/lexicon.tsv");
pub const STOPWORDS_TXT: &str = include_str!("../fixtures/resources/stopwords.txt");
pub const TERMBANK_TSV: &str = include_str!("../fixtures/resources/termbank.tsv");

/// Column mapping matching `corpus.csv`'s header.
pub fn column_mapping() -> ColumnMapping {
    ColumnMapping {
        id: "ID".into(),
        issue: "Issue".into(),
        date: Some("Date".into()),
        action: Some("Action".into()),
    }
}

/// Write the fixture tree (`corpus.csv` + `resources/`) under `dir`.
pub fn materialize(dir: &Path) -> Result<FixturePaths> {
    let write = |rel: &str, content: &str| -> Result<PathBuf> {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        std::fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    };
    Ok(FixturePaths {
        corpus: write("corpus.csv", CORPUS_CSV)?,
        abbrev: write("resources/abbrev.tsv", ABBREV_TSV)?,
        lexicon: write("resources/lexicon.tsv", LEXICON_TSV)?,
        stopwords: write("resources/stopwords.txt", STOPWORDS_TXT)?,
        termbank: write("resources/termbank.tsv", TERMBANK_TSV)?,
    })
}

#[derive(Debug, Clone)]
pub struct FixturePaths {
    pub corpus: PathBuf,
    pub abbrev: PathBuf,
    pub lexicon: PathBuf,
    pub stopwords: PathBuf,
    pub termbank: PathBuf,
}

impl FixturePaths {
    pub fn resource_dir(&self) -> &Path {
        self.abbrev.parent().expect("resources dir")
    }
}

/// Load the fixture corpus and resources without touching the filesystem.
pub fn load() -> Result<(Corpus, ResourceBundle)> {
    let dir = tempfile_dir()?;
    let paths = materialize(dir.path())?;
    let corpus = crate::corpus::load_corpus(&paths.corpus, &column_mapping(), TextField::Both)?;
    let resources = crate::resources::load_resources(
        Some(&paths.abbrev),
        Some(&paths.lexicon),
        Some(&paths.stopwords),
        Some(&paths.termbank),
    )?;
    Ok((corpus, resources))
}

fn tempfile_dir() -> Result<tempdir::TempDir> {
    tempdir::TempDir::new().map_err(|e| Error::io("<tempdir>", e))
}

mod tempdir {
    //! Minimal self-cleaning temp directory so the library crate does not
    //! depend on `tempfile` outside dev-dependencies.
    use std::path::{Path, PathBuf};
    use std::sync::atomic::{AtomicU64, Ordering};

    static COUNTER: AtomicU64 = AtomicU64::new(0);

    pub struct TempDir(PathBuf);

    impl TempDir {
        pub fn new() -> std::io::Result<TempDir> {
            let pid = std::process::id();
            let n = COUNTER.fetch_add(1, Ordering::Relaxed);
            let path = std::env::temp_dir().join(format!("logmaint-fixture-{pid}-{n}"));
            std::fs::create_dir_all(&path)?;
            Ok(TempDir(path))
        }

        pub fn path(&self) -> &Path {
            &self.0
        }
    }

    impl Drop for TempDir {
        fn drop(&mut self) {
            let _ = std::fs::remove_dir_all(&self.0);
        }
    }
}
