//! Offline embedder: signed feature hashing of character trigrams.

use async_trait::async_trait;

use super::{EmbeddingError, EmbeddingProvider, EmbeddingVector};

pub const MIN_LOCAL_DIM: usize = 8;

const NGRAM: usize = 3;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

// splitmix64 finalizer; decorrelates the sign bit from the bucket.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Raw (unnormalized) hashed trigram counts. The text is lowercased,
/// whitespace-collapsed and padded with one space on each side.
pub fn hashed_trigram_counts(text: &str, dim: usize) -> Vec<f64> {
    let mut padded = String::with_capacity(text.len() + 2);
    padded.push(' ');
    padded.push_str(&text.to_lowercase().split_whitespace().collect::<Vec<_>>().join(" "));
    padded.push(' ');
    let chars: Vec<char> = padded.chars().collect();
    let mut out = vec![0.0; dim];
    let mut buf = String::new();
    for w in chars.windows(NGRAM) {
        buf.clear();
        buf.extend(w);
        let h = fnv1a(buf.as_bytes());
        let bucket = (h % dim as u64) as usize;
        let sign = if mix(h) & 1 == 0 { 1.0 } else { -1.0 };
        out[bucket] += sign;
    }
    out
}

/// Deterministic embedding of `text` into `dim` dimensions.
///
/// Panics if `dim < MIN_LOCAL_DIM`.
pub fn local_hash_embed(text: &str, dim: usize) -> EmbeddingVector {
    assert!(dim >= MIN_LOCAL_DIM, "local embedder needs dim >= {MIN_LOCAL_DIM}");
    EmbeddingVector::normalized(nonzero_counts(text, dim)).expect("hashed counts are finite and nonzero")
}

fn nonzero_counts(text: &str, dim: usize) -> Vec<f64> {
    let mut counts = hashed_trigram_counts(text, dim);
    if counts.iter().all(|c| *c == 0.0) {
        // Every trigram cancelled out (or none existed); pin a fixed direction.
        counts[(fnv1a(text.as_bytes()) % dim as u64) as usize] = 1.0;
    }
    counts
}

#[derive(Debug, Clone)]
pub struct LocalHashEmbedder {
    dim: usize,
    batch_size: usize,
}

impl LocalHashEmbedder {
    pub fn new(dim: usize, batch_size: usize) -> Result<Self, EmbeddingError> {
        if dim < MIN_LOCAL_DIM {
            return Err(EmbeddingError::Config(format!("local embedder dim {dim} below minimum {MIN_LOCAL_DIM}")));
        }
        if batch_size == 0 {
            return Err(EmbeddingError::Config("batch_size must be positive".into()));
        }
        Ok(Self { dim, batch_size })
    }

    pub fn embed(&self, text: &str) -> EmbeddingVector {
        local_hash_embed(text, self.dim)
    }
}

#[async_trait]
impl EmbeddingProvider for LocalHashEmbedder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn batch_size(&self) -> usize {
        self.batch_size
    }

    fn describe(&self) -> String {
        format!("local_deterministic(dim={})", self.dim)
    }

    async fn embed_raw(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, EmbeddingError> {
        Ok(texts.iter().map(|t| nonzero_counts(t, self.dim)).collect())
    }
}
