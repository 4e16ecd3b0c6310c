//! Chat-completion providers used for generation and translation.

use std::time::Duration;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};
use tokio::sync::Semaphore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        Self { role: Role::System, content: content.into() }
    }
    pub fn user(content: impl Into<String>) -> Self {
        Self { role: Role::User, content: content.into() }
    }
    pub fn assistant(content: impl Into<String>) -> Self {
        Self { role: Role::Assistant, content: content.into() }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("chat provider error: {message}")]
pub struct ProviderError {
    pub message: String,
    pub retriable: bool,
}

#[async_trait]
pub trait ChatProvider: Send + Sync {
    fn describe(&self) -> String;

    /// The raw assistant message for `messages`.
    async fn complete(&self, messages: &[ChatMessage]) -> Result<String, ProviderError>;
}

#[derive(Debug, Clone)]
pub struct RemoteChatConfig {
    /// Base URL; requests go to `{base_url}/chat/completions`.
    pub base_url: String,
    pub model: String,
    pub api_key: Option<String>,
    pub timeout: Duration,
    pub max_concurrency: usize,
}

/// Chat-completions-style JSON-over-HTTP provider.
pub struct RemoteChatProvider {
    http: reqwest::Client,
    cfg: RemoteChatConfig,
    permits: Semaphore,
}

impl std::fmt::Debug for RemoteChatProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RemoteChatProvider")
            .field("base_url", &self.cfg.base_url)
            .field("model", &self.cfg.model)
            .finish()
    }
}

#[derive(Deserialize)]
struct CompletionResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ChoiceMessage,
}

#[derive(Deserialize)]
struct ChoiceMessage {
    #[serde(default)]
    content: Option<String>,
}

impl RemoteChatProvider {
    pub fn new(cfg: RemoteChatConfig) -> Result<Self, ProviderError> {
        let http = reqwest::Client::builder()
            .timeout(cfg.timeout)
            .build()
            .map_err(|e| ProviderError { message: e.to_string(), retriable: false })?;
        let permits = Semaphore::new(cfg.max_concurrency.max(1));
        Ok(Self { http, cfg, permits })
    }
}

#[async_trait]
impl ChatProvider for RemoteChatProvider {
    fn describe(&self) -> String {
        format!("remote_chat(model={})", self.cfg.model)
    }

    async fn complete(&self, messages: &[ChatMessage]) -> Result<String, ProviderError> {
        let _permit = self.permits.acquire().await.expect("semaphore never closed");
        let url = format!("{}/chat/completions", self.cfg.base_url.trim_end_matches('/'));
        let mut req = self.http.post(url).json(&serde_json::json!({
            "model": self.cfg.model,
            "messages": messages,
            "temperature": 0,
            "response_format": { "type": "json_object" },
        }));
        if let Some(key) = &self.cfg.api_key {
            req = req.bearer_auth(key);
        }
        let resp =
            req.send().await.map_err(|e| ProviderError { message: e.without_url().to_string(), retriable: true })?;
        let status = resp.status();
        if !status.is_success() {
            return Err(ProviderError {
                message: format!("HTTP {status}"),
                retriable: status.is_server_error() || status == reqwest::StatusCode::TOO_MANY_REQUESTS,
            });
        }
        let body: CompletionResponse = resp.json().await.map_err(|e| ProviderError {
            message: format!("malformed completion: {}", e.without_url()),
            retriable: false,
        })?;
        body.choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| ProviderError { message: "completion has no content".into(), retriable: false })
    }
}
