//! Line-oriented corpus store.
//!
//! Records live in a JSON-lines file in the dump format. Only one writer may
//! append at a time; the writer holds `<path>.lock`, created exclusively and
//! removed when the [`StoreWriter`] drops.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::dedup::dedup_key;
use super::record::FeedbackRecord;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("corpus store I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus store {path} line {line}: {source}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("corpus store {0} is locked by another writer")]
    Locked(PathBuf),
}

#[derive(Debug, Default)]
pub struct CorpusStore {
    path: Option<PathBuf>,
    records: Vec<FeedbackRecord>,
}

impl CorpusStore {
    /// A store that only lives in memory.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (or prepares to create) the store at `path`, loading existing
    /// records.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let path = path.into();
        let records = if path.exists() { read_records(&path)? } else { Vec::new() };
        Ok(Self { path: Some(path), records })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn records(&self) -> &[FeedbackRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Duplicate keys already present, as owned pairs.
    pub fn keys(&self) -> HashSet<(String, String)> {
        self.records
            .iter()
            .map(|r| {
                let (a, b) = dedup_key(r);
                (a.to_string(), b.to_string())
            })
            .collect()
    }

    /// Takes the single-writer lock.
    pub fn writer(&mut self) -> Result<StoreWriter<'_>, StoreError> {
        let lock = match &self.path {
            Some(p) => Some(acquire_lock(p)?),
            None => None,
        };
        Ok(StoreWriter { store: self, lock })
    }

    pub fn into_records(self) -> Vec<FeedbackRecord> {
        self.records
    }
}

pub struct StoreWriter<'a> {
    store: &'a mut CorpusStore,
    lock: Option<LockFile>,
}

impl StoreWriter<'_> {
    pub fn append(&mut self, records: &[FeedbackRecord]) -> Result<(), StoreError> {
        if records.is_empty() {
            return Ok(());
        }
        if let Some(path) = &self.store.path {
            let io = |source| StoreError::Io { path: path.clone(), source };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(io)?;
            }
            let file = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
            let mut w = BufWriter::new(file);
            for r in records {
                serde_json::to_writer(&mut w, r).expect("record serializes");
                w.write_all(b"\n").map_err(io)?;
            }
            w.flush().map_err(io)?;
            w.get_ref().sync_data().map_err(io)?;
        }
        self.store.records.extend_from_slice(records);
        Ok(())
    }

    pub fn store(&self) -> &CorpusStore {
        self.store
    }
}

impl Drop for StoreWriter<'_> {
    fn drop(&mut self) {
        self.lock.take();
    }
}

struct LockFile(PathBuf);

impl Drop for LockFile {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

fn lock_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".lock");
    path.with_file_name(name)
}

fn acquire_lock(path: &Path) -> Result<LockFile, StoreError> {
    let lock = lock_path(path);
    if let Some(parent) = lock.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| StoreError::Io { path: parent.to_path_buf(), source })?;
    }
    match OpenOptions::new().write(true).create_new(true).open(&lock) {
        Ok(mut f) => {
            let _ = writeln!(f, "{}", std::process::id());
            Ok(LockFile(lock))
        }
        Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(StoreError::Locked(path.to_path_buf())),
        Err(source) => Err(StoreError::Io { path: lock, source }),
    }
}

/// Reads a store/dump file of already-normalized records. Blank lines are
/// skipped; any other unparsable line is an error (the store is trusted
/// output, unlike an import dump).
pub fn read_records(path: &Path) -> Result<Vec<FeedbackRecord>, StoreError> {
    let file = File::open(path).map_err(|source| StoreError::Io { path: path.to_path_buf(), source })?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| StoreError::Io { path: path.to_path_buf(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|source| StoreError::Corrupt {
            path: path.to_path_buf(),
            line: i + 1,
            source,
        })?;
        out.push(rec);
    }
    Ok(out)
}
