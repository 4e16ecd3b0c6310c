//! Offline import of corpus dumps (one JSON object per line, field names as in
//! [`FeedbackRecord`]; see `docs/corpus-format.md`).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use super::record::{FeedbackRecord, IngestReport, InitiativeMeta, RawSubmission, RejectReason};
use super::store::{CorpusStore, StoreError};
use super::{ingest_normalized, Candidate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DumpFormat {
    #[default]
    JsonLines,
}

#[derive(Debug, thiserror::Error)]
pub enum ImportError {
    #[error("cannot read dump {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Store(#[from] StoreError),
}

/// A dump line. Every field is optional at the serde level so that a
/// structurally valid but incomplete object becomes a counted rejection
/// instead of aborting the import. Unknown fields are ignored.
#[derive(Debug, Deserialize)]
struct DumpLine {
    record_id: Option<String>,
    initiative_id: Option<String>,
    initiative_title: Option<String>,
    topic: Option<String>,
    stakeholder_group: Option<String>,
    organization_name: Option<String>,
    country: Option<String>,
    language: Option<String>,
    submitted_at: Option<String>,
    text: Option<String>,
}

/// Topic assigned when a dump line carries none.
pub const UNSPECIFIED_TOPIC: &str = "unspecified";

/// Turns one dump line into a raw submission plus its initiative metadata.
/// Lines without an initiative or a text field are parse rejections.
pub fn parse_dump_line(line: &str) -> Result<(RawSubmission, InitiativeMeta), RejectReason> {
    let l: DumpLine = serde_json::from_str(line).map_err(|_| RejectReason::Parse)?;
    let initiative_id =
        l.initiative_id.map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).ok_or(RejectReason::Parse)?;
    let text = l.text.ok_or(RejectReason::Parse)?;

    let mut declared = BTreeMap::new();
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            declared.insert(k.to_string(), v);
        }
    };
    put("user_type", l.stakeholder_group);
    put("organization", l.organization_name);
    put("country", l.country);
    put("language", l.language);
    put("date", l.submitted_at);

    let meta = InitiativeMeta {
        initiative_id: initiative_id.clone(),
        title: l.initiative_title.unwrap_or_else(|| initiative_id.clone()),
        topic: l
            .topic
            .map(|t| t.trim().to_string())
            .filter(|t| !t.is_empty())
            .unwrap_or_else(|| UNSPECIFIED_TOPIC.to_string()),
    };
    let raw = RawSubmission {
        source_id: l.record_id.filter(|s| !s.is_empty()).unwrap_or_else(|| "dump".to_string()),
        initiative_id,
        payload: text,
        declared_metadata: declared,
    };
    Ok((raw, meta))
}

/// Imports every non-blank line of `path` into `store`. Malformed lines are
/// counted, never fatal.
pub fn import_dump(path: &Path, format: DumpFormat, store: &mut CorpusStore) -> Result<IngestReport, ImportError> {
    let DumpFormat::JsonLines = format;
    let io = |source| ImportError::Io { path: path.to_path_buf(), source };
    let reader = BufReader::new(File::open(path).map_err(io)?);
    let mut candidates = Vec::new();
    for line in reader.split(b'\n') {
        let bytes = line.map_err(io)?;
        let candidate: Candidate = match std::str::from_utf8(&bytes) {
            Ok(s) if s.trim().is_empty() => continue,
            Ok(s) => parse_dump_line(s),
            Err(_) => Err(RejectReason::Parse),
        };
        candidates.push(candidate);
    }
    Ok(ingest_normalized(candidates, store)?)
}

/// Writes records in the dump format.
pub fn write_dump<W: std::io::Write>(mut w: W, records: &[FeedbackRecord]) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}
