//! Client for the consultation portal's public feedback endpoint.
//!
//! The remote contract (documented in `docs/feedback-api.md`):
//!
//! ```text
//! GET {base}/initiatives/{id}                          -> {"id", "title", "topic"} | 404
//! GET {base}/initiatives/{id}/feedback?page=N&size=S   -> {"_embedded": {"feedback": [...]},
//!                                                          "page": {"number", "size",
//!                                                                   "totalElements", "totalPages"}}
//! ```
//!
//! Page 0 is fetched first to learn `totalPages`; the remaining pages are
//! requested with at most `parallelism` in flight and yielded in page order.

use std::collections::BTreeMap;
use std::time::Duration;

use futures::stream::{self, BoxStream, StreamExt};
use serde::Deserialize;

use super::record::{InitiativeMeta, RawSubmission};

#[derive(Debug, Clone)]
pub struct FetchConfig {
    pub base_url: String,
    pub timeout: Duration,
    pub parallelism: usize,
}

impl Default for FetchConfig {
    fn default() -> Self {
        Self { base_url: "http://127.0.0.1:8088".to_string(), timeout: Duration::from_secs(30), parallelism: 4 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FetchError {
    #[error("initiative `{0}` not found")]
    NotFound(String),
    /// Transport failure or server-side error; safe to resume from `page`.
    #[error("fetching page {page} failed: {message}")]
    Retriable { page: usize, message: String },
    #[error("page {page} has an unexpected shape: {message}")]
    Decode { page: usize, message: String },
    #[error("invalid request: {0}")]
    Invalid(String),
}

impl FetchError {
    pub fn is_retriable(&self) -> bool {
        matches!(self, FetchError::Retriable { .. })
    }

    /// Page to resume from, for retriable failures.
    pub fn cursor(&self) -> Option<usize> {
        match self {
            FetchError::Retriable { page, .. } => Some(*page),
            _ => None,
        }
    }
}

#[derive(Debug, Deserialize)]
struct InitiativeDto {
    id: String,
    #[serde(default)]
    title: String,
    #[serde(default)]
    topic: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct FeedbackDto {
    id: serde_json::Value,
    #[serde(default)]
    feedback: String,
    user_type: Option<String>,
    organization: Option<String>,
    country: Option<String>,
    language: Option<String>,
    date_feedback: Option<String>,
}

#[derive(Debug, Deserialize, Default)]
struct Embedded {
    #[serde(default)]
    feedback: Vec<FeedbackDto>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct PageInfo {
    total_pages: usize,
}

#[derive(Debug, Deserialize)]
struct PageDto {
    #[serde(rename = "_embedded", default)]
    embedded: Embedded,
    page: PageInfo,
}

#[derive(Debug, Clone)]
pub struct FeedbackClient {
    http: reqwest::Client,
    cfg: FetchConfig,
}

impl FeedbackClient {
    pub fn new(cfg: FetchConfig) -> Result<Self, FetchError> {
        if cfg.parallelism == 0 {
            return Err(FetchError::Invalid("parallelism must be positive".into()));
        }
        let http =
            reqwest::Client::builder().timeout(cfg.timeout).build().map_err(|e| FetchError::Invalid(e.to_string()))?;
        Ok(Self { http, cfg })
    }

    fn url(&self, path: &str) -> String {
        format!("{}/{}", self.cfg.base_url.trim_end_matches('/'), path)
    }

    /// Initiative metadata. A 404 is definitive.
    pub async fn initiative(&self, initiative_id: &str) -> Result<InitiativeMeta, FetchError> {
        let resp = self
            .http
            .get(self.url(&format!("initiatives/{initiative_id}")))
            .send()
            .await
            .map_err(|e| FetchError::Retriable { page: 0, message: e.to_string() })?;
        if resp.status() == reqwest::StatusCode::NOT_FOUND {
            return Err(FetchError::NotFound(initiative_id.to_string()));
        }
        let resp = check_status(resp, 0)?;
        let dto: InitiativeDto =
            resp.json().await.map_err(|e| FetchError::Decode { page: 0, message: e.to_string() })?;
        Ok(InitiativeMeta {
            initiative_id: dto.id,
            topic: dto.topic.unwrap_or_else(|| super::dump::UNSPECIFIED_TOPIC.to_string()),
            title: dto.title,
        })
    }

    async fn page(
        &self,
        initiative_id: &str,
        page: usize,
        page_size: usize,
    ) -> Result<(Vec<RawSubmission>, usize), FetchError> {
        let resp = self
            .http
            .get(self.url(&format!("initiatives/{initiative_id}/feedback")))
            .query(&[("page", page), ("size", page_size)])
            .send()
            .await
            .map_err(|e| FetchError::Retriable { page, message: e.to_string() })?;
        if resp.status() == reqwest::StatusCode::NOT_FOUND {
            return Err(FetchError::NotFound(initiative_id.to_string()));
        }
        let resp = check_status(resp, page)?;
        let body = resp.bytes().await.map_err(|e| FetchError::Retriable { page, message: e.to_string() })?;
        let dto: PageDto =
            serde_json::from_slice(&body).map_err(|e| FetchError::Decode { page, message: e.to_string() })?;
        let items = dto.embedded.feedback.into_iter().map(|f| to_raw(initiative_id, f)).collect();
        Ok((items, dto.page.total_pages))
    }

    /// Every submission the source reports for the initiative, in source
    /// order. The stream ends after the first error.
    pub fn feedback_stream(
        &self,
        initiative_id: &str,
        page_size: usize,
    ) -> BoxStream<'static, Result<RawSubmission, FetchError>> {
        if initiative_id.trim().is_empty() {
            return stream::iter([Err(FetchError::Invalid("empty initiative id".into()))]).boxed();
        }
        if page_size == 0 {
            return stream::iter([Err(FetchError::Invalid("page size must be positive".into()))]).boxed();
        }
        let client = self.clone();
        let id = initiative_id.to_string();
        stream::once(async move {
            match client.page(&id, 0, page_size).await {
                Err(e) => stream::iter([Err(e)]).boxed(),
                Ok((first, total_pages)) => {
                    let parallelism = client.cfg.parallelism;
                    let rest = stream::iter(1..total_pages)
                        .map(move |p| {
                            let client = client.clone();
                            let id = id.clone();
                            async move { client.page(&id, p, page_size).await }
                        })
                        .buffered(parallelism)
                        .flat_map(|res| match res {
                            Ok((items, _)) => stream::iter(items.into_iter().map(Ok).collect::<Vec<_>>()),
                            Err(e) => stream::iter(vec![Err(e)]),
                        });
                    stream::iter(first.into_iter().map(Ok)).chain(rest).boxed()
                }
            }
        })
        .flatten()
        .scan(false, |failed, item| {
            if *failed {
                return futures::future::ready(None);
            }
            *failed = item.is_err();
            futures::future::ready(Some(item))
        })
        .boxed()
    }

    /// Collects the whole stream, failing on the first error.
    pub async fn fetch_initiative_feedback(
        &self,
        initiative_id: &str,
        page_size: usize,
    ) -> Result<Vec<RawSubmission>, FetchError> {
        let mut out = Vec::new();
        let mut s = self.feedback_stream(initiative_id, page_size);
        while let Some(item) = s.next().await {
            out.push(item?);
        }
        Ok(out)
    }
}

fn check_status(resp: reqwest::Response, page: usize) -> Result<reqwest::Response, FetchError> {
    let status = resp.status();
    if status.is_success() {
        Ok(resp)
    } else if status.is_server_error() || status == reqwest::StatusCode::TOO_MANY_REQUESTS {
        Err(FetchError::Retriable { page, message: format!("HTTP {status}") })
    } else {
        Err(FetchError::Decode { page, message: format!("HTTP {status}") })
    }
}

fn to_raw(initiative_id: &str, f: FeedbackDto) -> RawSubmission {
    let source_id = match f.id {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    };
    let mut declared = BTreeMap::new();
    for (k, v) in [
        ("user_type", f.user_type),
        ("organization", f.organization),
        ("country", f.country),
        ("language", f.language),
        ("date", f.date_feedback),
    ] {
        if let Some(v) = v {
            declared.insert(k.to_string(), v);
        }
    }
    RawSubmission {
        source_id,
        initiative_id: initiative_id.to_string(),
        payload: f.feedback,
        declared_metadata: declared,
    }
}
