//! Dense text embeddings behind a pluggable provider.
//!
//! Every vector leaving this module is L2-normalized, so cosine similarity
//! downstream is a plain dot product.

use std::sync::Arc;
use std::time::Duration;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};

pub mod local;
pub mod remote;
mod vector;

pub use local::{local_hash_embed, LocalHashEmbedder};
pub use remote::{RemoteEmbedder, RemoteEmbedderConfig, RetryPolicy};
pub use vector::{EmbeddingVector, UNIT_NORM_TOLERANCE};

pub const DEFAULT_DIM: usize = 1536;

/// Longer inputs are cut to this many characters before embedding.
pub const MAX_EMBED_CHARS: usize = 8000;

#[derive(Debug, thiserror::Error)]
pub enum EmbeddingError {
    #[error("invalid embedding request: {0}")]
    Invalid(String),
    #[error("embedding configuration error: {0}")]
    Config(String),
    #[error("embedding provider error: {message}")]
    Provider { message: String, retriable: bool },
    #[error("degenerate vector: {0}")]
    Degenerate(String),
}

impl EmbeddingError {
    pub fn is_retriable(&self) -> bool {
        matches!(self, EmbeddingError::Provider { retriable: true, .. })
    }
}

#[async_trait]
pub trait EmbeddingProvider: Send + Sync {
    fn dim(&self) -> usize;

    fn batch_size(&self) -> usize;

    /// True when embedding never touches the network.
    fn is_local(&self) -> bool {
        true
    }

    fn describe(&self) -> String;

    /// Provider-native vectors, one per input, in input order. Callers go
    /// through [`embed_batch`], which validates and normalizes.
    async fn embed_raw(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, EmbeddingError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ProviderKind {
    RemoteHttp,
    #[default]
    LocalDeterministic,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ProviderConfig {
    pub kind: ProviderKind,
    pub endpoint: Option<String>,
    pub model: Option<String>,
    pub dim: usize,
    pub batch_size: usize,
    pub timeout_secs: u64,
    pub max_concurrency: usize,
    /// Name of the environment variable holding the API key.
    pub api_key_env: Option<String>,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        Self {
            kind: ProviderKind::LocalDeterministic,
            endpoint: None,
            model: None,
            dim: DEFAULT_DIM,
            batch_size: 64,
            timeout_secs: 30,
            max_concurrency: 4,
            api_key_env: None,
        }
    }
}

impl ProviderConfig {
    pub fn build(&self) -> Result<Arc<dyn EmbeddingProvider>, EmbeddingError> {
        match self.kind {
            ProviderKind::LocalDeterministic => Ok(Arc::new(LocalHashEmbedder::new(self.dim, self.batch_size)?)),
            ProviderKind::RemoteHttp => {
                let endpoint = self
                    .endpoint
                    .clone()
                    .ok_or_else(|| EmbeddingError::Config("remote embedder needs an endpoint".into()))?;
                let api_key = self.api_key_env.as_deref().and_then(|k| std::env::var(k).ok());
                Ok(Arc::new(RemoteEmbedder::new(RemoteEmbedderConfig {
                    endpoint,
                    model: self.model.clone().unwrap_or_default(),
                    api_key,
                    dim: self.dim,
                    batch_size: self.batch_size,
                    timeout: Duration::from_secs(self.timeout_secs),
                    max_concurrency: self.max_concurrency,
                    retry: RetryPolicy::default(),
                })?))
            }
        }
    }
}

/// A vector plus whether its source text was cut to [`MAX_EMBED_CHARS`].
#[derive(Debug, Clone, PartialEq)]
pub struct Embedded {
    pub vector: EmbeddingVector,
    pub truncated: bool,
}

/// Cuts `text` to [`MAX_EMBED_CHARS`] characters.
pub fn truncate_for_embedding(text: &str) -> (&str, bool) {
    match text.char_indices().nth(MAX_EMBED_CHARS) {
        Some((byte, _)) => (&text[..byte], true),
        None => (text, false),
    }
}

/// Embeds one batch. Output order matches input order.
pub async fn embed_batch(provider: &dyn EmbeddingProvider, texts: &[String]) -> Result<Vec<Embedded>, EmbeddingError> {
    if texts.len() > provider.batch_size() {
        return Err(EmbeddingError::Invalid(format!(
            "batch of {} exceeds batch_size {}",
            texts.len(),
            provider.batch_size()
        )));
    }
    if let Some(i) = texts.iter().position(|t| t.trim().is_empty()) {
        return Err(EmbeddingError::Invalid(format!("text #{i} is empty")));
    }
    let mut flags = Vec::with_capacity(texts.len());
    let inputs: Vec<String> = texts
        .iter()
        .map(|t| {
            let (cut, truncated) = truncate_for_embedding(t);
            flags.push(truncated);
            cut.to_string()
        })
        .collect();

    let raw = provider.embed_raw(&inputs).await?;
    if raw.len() != inputs.len() {
        return Err(EmbeddingError::Provider {
            message: format!("asked for {} vectors, got {}", inputs.len(), raw.len()),
            retriable: false,
        });
    }
    raw.into_iter()
        .zip(flags)
        .map(|(values, truncated)| {
            if values.len() != provider.dim() {
                return Err(EmbeddingError::Config(format!(
                    "provider returned dim {} but the index expects {}",
                    values.len(),
                    provider.dim()
                )));
            }
            Ok(Embedded { vector: EmbeddingVector::normalized(values)?, truncated })
        })
        .collect()
}

/// Embeds any number of texts, batch by batch.
pub async fn embed_all(provider: &dyn EmbeddingProvider, texts: &[String]) -> Result<Vec<Embedded>, EmbeddingError> {
    let mut out = Vec::with_capacity(texts.len());
    for chunk in texts.chunks(provider.batch_size().max(1)) {
        out.extend(embed_batch(provider, chunk).await?);
    }
    Ok(out)
}

/// Single text convenience.
pub async fn embed_one(provider: &dyn EmbeddingProvider, text: &str) -> Result<Embedded, EmbeddingError> {
    let mut v = embed_batch(provider, &[text.to_string()]).await?;
    Ok(v.remove(0))
}
