//! Catalog records and their append-only JSON-lines store.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::code::Family;
use crate::error::{Error, Result};
use crate::hadamard::SearchTuple;
use crate::weight::Extremality;

/// One matrix found in the code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    /// Which orthogonality graph the clique came from.
    pub parity: u8,
    /// Index into [`CatalogRecord::classes`].
    pub class: usize,
}

/// One equivalence class among the matrices found in the code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub aut_order: String,
    /// Certificate digest.
    pub cert: String,
    pub members: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub label: String,
    pub family: Family,
    /// Construction parameters as a code spec line.
    pub spec: String,
    pub n: usize,
    pub k: usize,
    pub self_dual: bool,
    pub min_weight: Option<usize>,
    pub extremality: Option<Extremality>,
    /// Nonzero coefficients as `w:A_w`, space separated.
    pub enumerator: String,
    pub enumerator_sha256: String,
    pub tuple: Option<SearchTuple>,
    pub matrices: Vec<MatrixRecord>,
    pub classes: Vec<ClassRecord>,
    /// Code certificate digest, present once the analysis is complete.
    pub code_cert: Option<String>,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
}

impl CatalogRecord {
    /// The record with its timestamp cleared.
    pub fn without_timestamps(&self) -> Self {
        Self {
            created_at: 0,
            ..self.clone()
        }
    }

    pub fn is_complete(&self) -> bool {
        self.code_cert.is_some()
    }
}

/// Records in a JSON-lines file, one per line, indexed by label in memory.
#[derive(Debug)]
pub struct CatalogStore {
    path: PathBuf,
    records: Vec<CatalogRecord>,
    index: HashMap<String, usize>,
}

impl CatalogStore {
    /// Opens the store at `path`, creating an empty one if missing.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut store = Self {
            path: path.clone(),
            records: Vec::new(),
            index: HashMap::new(),
        };
        if !path.exists() {
            File::create(&path)?;
            return Ok(store);
        }
        for (ln, line) in BufReader::new(File::open(&path)?).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CatalogRecord = serde_json::from_str(&line)
                .map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), ln + 1)))?;
            store.push_indexed(rec)?;
        }
        Ok(store)
    }

    fn push_indexed(&mut self, rec: CatalogRecord) -> Result<()> {
        if self.index.contains_key(&rec.label) {
            return Err(Error::Param(format!(
                "label {:?} is already in the catalog",
                rec.label
            )));
        }
        self.index.insert(rec.label.clone(), self.records.len());
        self.records.push(rec);
        Ok(())
    }

    /// Appends a record; labels must be new.
    pub fn insert(&mut self, rec: CatalogRecord) -> Result<()> {
        if self.index.contains_key(&rec.label) {
            return Err(Error::Param(format!(
                "label {:?} is already in the catalog",
                rec.label
            )));
        }
        let mut line = serde_json::to_string(&rec)?;
        line.push('\n');
        let mut f = OpenOptions::new().append(true).open(&self.path)?;
        f.write_all(line.as_bytes())?;
        f.sync_data()?;
        self.push_indexed(rec)
    }

    pub fn get(&self, label: &str) -> Option<&CatalogRecord> {
        self.index.get(label).map(|&i| &self.records[i])
    }

    pub fn records(&self) -> &[CatalogRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}
