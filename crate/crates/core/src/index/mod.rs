//! Exact cosine top-K over embedded records with metadata filtering.
//!
//! Vectors are stored unit-normalized, so scoring is a dot product over a
//! flat row-major buffer. Every query scans the whole index; results are
//! ordered by score descending, then `record_id` ascending.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

mod filter;
mod persist;
mod rerank;

pub use filter::{ChunkMeta, Filter};
pub use persist::{FORMAT_VERSION, MAGIC};
pub use rerank::{rerank_diverse, rerank_with, DiversityConfig};

use crate::embedding::EmbeddingVector;

#[derive(Debug, thiserror::Error)]
pub enum IndexError {
    #[error("dimension mismatch: index has {expected}, got {actual}")]
    DimMismatch { expected: usize, actual: usize },
    #[error("cosine undefined for a zero vector")]
    ZeroVector,
    #[error("unsupported index file: {0}")]
    Version(String),
    #[error("corrupt index file: {0}")]
    Corrupt(String),
    #[error("index I/O: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexedChunk {
    pub record_id: String,
    pub vector: EmbeddingVector,
    pub meta: ChunkMeta,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredHit {
    pub record_id: String,
    pub score: f64,
    /// 1-based position in the retrieval order.
    pub rank: usize,
    pub meta: ChunkMeta,
}

/// Top-K hits plus how many chunks passed the filter.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub hits: Vec<ScoredHit>,
    pub matched: usize,
    pub scanned: usize,
}

/// `dot(a, b) / (|a| |b|)`.
pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64, IndexError> {
    if a.len() != b.len() {
        return Err(IndexError::DimMismatch { expected: a.len(), actual: b.len() });
    }
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(IndexError::ZeroVector);
    }
    Ok(dot(a, b) / (na * nb))
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += a[i] * b[i];
    }
    s
}

/// Best-first ordering: higher score, then smaller id.
pub fn hit_order(a_score: f64, a_id: &str, b_score: f64, b_id: &str) -> Ordering {
    b_score.partial_cmp(&a_score).expect("scores are finite").then_with(|| a_id.cmp(b_id))
}

// Heap entry whose `Ord` puts the worst kept hit on top of a max-heap.
struct Worst<'a> {
    score: f64,
    id: &'a str,
    slot: usize,
}

impl PartialEq for Worst<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Worst<'_> {}
impl PartialOrd for Worst<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Worst<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        hit_order(self.score, self.id, other.score, other.id)
    }
}

#[derive(Debug, Clone)]
pub struct VectorIndex {
    dim: usize,
    ids: Vec<String>,
    metas: Vec<ChunkMeta>,
    truncated: Vec<bool>,
    data: Vec<f64>,
    slots: HashMap<String, usize>,
}

impl VectorIndex {
    pub fn new(dim: usize) -> Self {
        Self { dim, ids: Vec::new(), metas: Vec::new(), truncated: Vec::new(), data: Vec::new(), slots: HashMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Inserts a chunk, replacing any chunk with the same `record_id`.
    pub fn upsert(&mut self, chunk: IndexedChunk) -> Result<(), IndexError> {
        if chunk.vector.dim() != self.dim {
            return Err(IndexError::DimMismatch { expected: self.dim, actual: chunk.vector.dim() });
        }
        match self.slots.get(&chunk.record_id) {
            Some(&slot) => {
                self.data[slot * self.dim..(slot + 1) * self.dim].copy_from_slice(chunk.vector.values());
                self.metas[slot] = chunk.meta;
                self.truncated[slot] = chunk.truncated;
            }
            None => {
                self.slots.insert(chunk.record_id.clone(), self.ids.len());
                self.ids.push(chunk.record_id);
                self.metas.push(chunk.meta);
                self.truncated.push(chunk.truncated);
                self.data.extend_from_slice(chunk.vector.values());
            }
        }
        Ok(())
    }

    /// Applies all chunks or none: the dimension of every chunk is checked
    /// before the first write.
    pub fn upsert_batch(&mut self, chunks: Vec<IndexedChunk>) -> Result<(), IndexError> {
        if let Some(bad) = chunks.iter().find(|c| c.vector.dim() != self.dim) {
            return Err(IndexError::DimMismatch { expected: self.dim, actual: bad.vector.dim() });
        }
        for c in chunks {
            self.upsert(c)?;
        }
        Ok(())
    }

    pub fn contains(&self, record_id: &str) -> bool {
        self.slots.contains_key(record_id)
    }

    pub fn get(&self, record_id: &str) -> Option<IndexedChunk> {
        let slot = *self.slots.get(record_id)?;
        Some(self.chunk_at(slot))
    }

    fn chunk_at(&self, slot: usize) -> IndexedChunk {
        IndexedChunk {
            record_id: self.ids[slot].clone(),
            vector: EmbeddingVector::from_unit(self.row(slot).to_vec()).expect("stored vectors are unit"),
            meta: self.metas[slot].clone(),
            truncated: self.truncated[slot],
        }
    }

    fn row(&self, slot: usize) -> &[f64] {
        &self.data[slot * self.dim..(slot + 1) * self.dim]
    }

    /// Chunks in insertion order.
    pub fn chunks(&self) -> impl Iterator<Item = IndexedChunk> + '_ {
        (0..self.len()).map(|s| self.chunk_at(s))
    }

    pub fn metas(&self) -> impl Iterator<Item = (&str, &ChunkMeta)> {
        self.ids.iter().map(String::as_str).zip(&self.metas)
    }

    /// Exact filtered top-K. The filter is applied during the scan, so
    /// `min(k, matched)` hits always come back.
    pub fn search(&self, query: &EmbeddingVector, k: usize, filter: &Filter) -> Result<SearchResult, IndexError> {
        if query.dim() != self.dim {
            return Err(IndexError::DimMismatch { expected: self.dim, actual: query.dim() });
        }
        let q = query.values();
        let mut heap: BinaryHeap<Worst<'_>> = BinaryHeap::with_capacity(k.saturating_add(1).min(self.len() + 1));
        let mut matched = 0usize;
        for slot in 0..self.len() {
            if !filter.matches(&self.metas[slot]) {
                continue;
            }
            matched += 1;
            if k == 0 {
                continue;
            }
            let cand = Worst { score: dot(q, self.row(slot)), id: &self.ids[slot], slot };
            if heap.len() < k {
                heap.push(cand);
            } else if let Some(top) = heap.peek() {
                if cand < *top {
                    heap.pop();
                    heap.push(cand);
                }
            }
        }
        let mut best = heap.into_vec();
        best.sort();
        let hits = best
            .into_iter()
            .enumerate()
            .map(|(i, w)| ScoredHit {
                record_id: w.id.to_string(),
                score: w.score,
                rank: i + 1,
                meta: self.metas[w.slot].clone(),
            })
            .collect();
        Ok(SearchResult { hits, matched, scanned: self.len() })
    }

    pub fn top_k(&self, query: &EmbeddingVector, k: usize, filter: &Filter) -> Result<Vec<ScoredHit>, IndexError> {
        Ok(self.search(query, k, filter)?.hits)
    }
}

/// An index shared between concurrent readers and an occasional writer.
/// A reader holds the read lock for a whole query, so it never sees a
/// half-applied batch.
#[derive(Debug, Clone)]
pub struct SharedIndex(Arc<RwLock<VectorIndex>>);

impl SharedIndex {
    pub fn new(index: VectorIndex) -> Self {
        Self(Arc::new(RwLock::new(index)))
    }

    pub fn read(&self) -> parking_lot::RwLockReadGuard<'_, VectorIndex> {
        self.0.read()
    }

    pub fn upsert_batch(&self, chunks: Vec<IndexedChunk>) -> Result<(), IndexError> {
        self.0.write().upsert_batch(chunks)
    }

    pub fn replace(&self, index: VectorIndex) {
        *self.0.write() = index;
    }
}
