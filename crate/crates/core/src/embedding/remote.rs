//! JSON-over-HTTP embedding provider.
//!
//! Request: `POST {endpoint}` with `{"model": "...", "input": ["...", ...]}`.
//! Response: either `{"embeddings": [[...], ...]}` or the common
//! `{"data": [{"embedding": [...], "index": 0}, ...]}` shape.

use std::time::Duration;

use async_trait::async_trait;
use serde::Deserialize;
use tokio::sync::Semaphore;

use super::{EmbeddingError, EmbeddingProvider};

#[derive(Debug, Clone)]
pub struct RetryPolicy {
    pub attempts: usize,
    pub initial_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self { attempts: 3, initial_backoff: Duration::from_millis(250) }
    }
}

#[derive(Debug, Clone)]
pub struct RemoteEmbedderConfig {
    pub endpoint: String,
    pub model: String,
    pub api_key: Option<String>,
    pub dim: usize,
    pub batch_size: usize,
    pub timeout: Duration,
    pub max_concurrency: usize,
    pub retry: RetryPolicy,
}

pub struct RemoteEmbedder {
    http: reqwest::Client,
    cfg: RemoteEmbedderConfig,
    permits: Semaphore,
}

impl std::fmt::Debug for RemoteEmbedder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // api_key deliberately omitted
        f.debug_struct("RemoteEmbedder")
            .field("endpoint", &self.cfg.endpoint)
            .field("model", &self.cfg.model)
            .field("dim", &self.cfg.dim)
            .finish()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EmbeddingsResponse {
    Plain { embeddings: Vec<Vec<f64>> },
    Data { data: Vec<DataItem> },
}

#[derive(Deserialize)]
struct DataItem {
    embedding: Vec<f64>,
    #[serde(default)]
    index: Option<usize>,
}

impl EmbeddingsResponse {
    fn into_vectors(self) -> Vec<Vec<f64>> {
        match self {
            EmbeddingsResponse::Plain { embeddings } => embeddings,
            EmbeddingsResponse::Data { mut data } => {
                if data.iter().all(|d| d.index.is_some()) {
                    data.sort_by_key(|d| d.index);
                }
                data.into_iter().map(|d| d.embedding).collect()
            }
        }
    }
}

enum Attempt {
    Retry(String),
    Fatal(EmbeddingError),
}

impl RemoteEmbedder {
    pub fn new(cfg: RemoteEmbedderConfig) -> Result<Self, EmbeddingError> {
        if cfg.dim == 0 || cfg.batch_size == 0 || cfg.max_concurrency == 0 || cfg.retry.attempts == 0 {
            return Err(EmbeddingError::Config(
                "dim, batch_size, max_concurrency and attempts must be positive".into(),
            ));
        }
        let http = reqwest::Client::builder()
            .timeout(cfg.timeout)
            .build()
            .map_err(|e| EmbeddingError::Config(e.to_string()))?;
        let permits = Semaphore::new(cfg.max_concurrency);
        Ok(Self { http, cfg, permits })
    }

    async fn attempt(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, Attempt> {
        let mut req =
            self.http.post(&self.cfg.endpoint).json(&serde_json::json!({ "model": self.cfg.model, "input": texts }));
        if let Some(key) = &self.cfg.api_key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().await.map_err(|e| Attempt::Retry(e.without_url().to_string()))?;
        let status = resp.status();
        if status.is_server_error() || status == reqwest::StatusCode::TOO_MANY_REQUESTS {
            return Err(Attempt::Retry(format!("HTTP {status}")));
        }
        if !status.is_success() {
            return Err(Attempt::Fatal(EmbeddingError::Provider {
                message: format!("HTTP {status}"),
                retriable: false,
            }));
        }
        let body: EmbeddingsResponse = resp.json().await.map_err(|e| {
            Attempt::Fatal(EmbeddingError::Provider {
                message: format!("malformed embeddings response: {}", e.without_url()),
                retriable: false,
            })
        })?;
        Ok(body.into_vectors())
    }
}

#[async_trait]
impl EmbeddingProvider for RemoteEmbedder {
    fn dim(&self) -> usize {
        self.cfg.dim
    }

    fn batch_size(&self) -> usize {
        self.cfg.batch_size
    }

    fn is_local(&self) -> bool {
        false
    }

    fn describe(&self) -> String {
        format!("remote_http(model={}, dim={})", self.cfg.model, self.cfg.dim)
    }

    async fn embed_raw(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, EmbeddingError> {
        let _permit = self.permits.acquire().await.expect("semaphore never closed");
        let mut backoff = self.cfg.retry.initial_backoff;
        let mut last = String::new();
        for attempt in 1..=self.cfg.retry.attempts {
            match self.attempt(texts).await {
                Ok(v) => return Ok(v),
                Err(Attempt::Fatal(e)) => return Err(e),
                Err(Attempt::Retry(msg)) => {
                    tracing::warn!(attempt, error = %msg, "embedding request failed");
                    last = msg;
                    if attempt < self.cfg.retry.attempts {
                        tokio::time::sleep(backoff).await;
                        backoff *= 2;
                    }
                }
            }
        }
        Err(EmbeddingError::Provider {
            message: format!("gave up after {} attempts: {last}", self.cfg.retry.attempts),
            retriable: true,
        })
    }
}
