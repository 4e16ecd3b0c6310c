//! Acquisition and normalization of consultation feedback.

pub mod dedup;
pub mod dump;
pub mod fetch;
pub mod language;
pub mod normalize;
pub mod record;
pub mod store;

pub use dedup::deduplicate;
pub use dump::{import_dump, DumpFormat, ImportError};
pub use fetch::{FeedbackClient, FetchConfig, FetchError};
pub use language::{detect_language, EU_LANGUAGES};
pub use normalize::normalize;
pub use record::{FeedbackRecord, IngestReport, InitiativeMeta, RawSubmission, RejectReason, StakeholderGroup};
pub use store::{CorpusStore, StoreError};

/// A submission ready for normalization, or an early (parse) rejection.
pub type Candidate = Result<(RawSubmission, InitiativeMeta), RejectReason>;

/// Normalizes, deduplicates (within the batch and against the store) and
/// persists a batch. Every candidate lands in exactly one report bucket.
pub fn ingest_normalized(candidates: Vec<Candidate>, store: &mut CorpusStore) -> Result<IngestReport, StoreError> {
    let mut report = IngestReport { fetched: candidates.len(), ..Default::default() };
    let mut normalized = Vec::with_capacity(candidates.len());
    for c in candidates {
        match c.and_then(|(raw, meta)| normalize(&raw, &meta)) {
            Ok(rec) => normalized.push(rec),
            Err(reason) => report.reject(reason),
        }
    }

    let (batch, in_batch_dups) = deduplicate(normalized);
    let existing = store.keys();
    let fresh: Vec<FeedbackRecord> =
        batch.into_iter().filter(|r| !existing.contains(&(r.initiative_id.clone(), r.text.clone()))).collect();
    report.duplicates_dropped = report.fetched - report.rejected - fresh.len();
    debug_assert!(report.duplicates_dropped >= in_batch_dups);
    report.accepted = fresh.len();

    store.writer()?.append(&fresh)?;
    debug_assert!(report.is_consistent());
    Ok(report)
}
