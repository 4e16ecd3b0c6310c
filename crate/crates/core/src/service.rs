//! HTTP+JSON API over the query pipeline. Schemas are in `docs/api.md`.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::cors::CorsLayer;

use crate::answer::{AnswerError, QueryRequest};
use crate::config::Config;
use crate::ingest::StakeholderGroup;
use crate::pipeline::{Engine, EngineError, InitiativeSummary, QueryOutcome, Reachability, Vocabularies};

/// Seconds a client should wait before retrying after a 503.
pub const RETRY_AFTER_SECS: u64 = 5;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiQuery {
    pub question: String,
    #[serde(default)]
    pub whom: Vec<String>,
    #[serde(default)]
    pub about: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiAnswer {
    #[serde(flatten)]
    pub outcome: QueryOutcome,
    pub query_echo: ApiQuery,
    pub timing_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionResponse {
    pub session_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderStatus {
    pub describe: String,
    pub reachability: Reachability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    /// `ok` once the corpus and index are loaded, else `degraded`.
    pub status: String,
    pub corpus_records: Option<usize>,
    pub index_dim: Option<usize>,
    pub index_size: Option<usize>,
    pub embedding: Option<ProviderStatus>,
    pub generation: Option<ProviderStatus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load_error: Option<String>,
    pub uptime_secs: u64,
}

/// API error body: `{"error": code, "message": text, "details": ...}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
    details: Option<Value>,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self { status, code, message: message.into(), details: None }
    }

    fn validation(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "validation", message)
    }

    fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    fn not_ready() -> Self {
        Self::new(StatusCode::SERVICE_UNAVAILABLE, "not_ready", "corpus is not loaded yet")
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)?;
        if let Some(valid) = self.details.as_ref().and_then(|d| d.get("valid")) {
            write!(f, " (valid: {valid})")?;
        }
        Ok(())
    }
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        self.status
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": self.code, "message": self.message });
        if let Some(d) = self.details {
            body["details"] = d;
        }
        let mut resp = (self.status, Json(body)).into_response();
        if self.status == StatusCode::SERVICE_UNAVAILABLE {
            resp.headers_mut().insert(header::RETRY_AFTER, RETRY_AFTER_SECS.into());
        }
        resp
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        if e.is_retriable() {
            return ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "provider_unavailable", e.to_string());
        }
        match e {
            EngineError::Invalid(m) => ApiError::validation(m),
            EngineError::Answer(AnswerError::GenerationContract { first, second }) => ApiError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "generation_contract",
                "the generation provider broke the answer contract twice",
            )
            .with_details(json!({ "first": first, "second": second })),
            other => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", other.to_string()),
        }
    }
}

struct Inner {
    engine: RwLock<Option<Arc<Engine>>>,
    load_error: RwLock<Option<String>>,
    started: Instant,
}

/// Shared handler state. Starts empty until an engine is installed.
#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    pub fn loading() -> Self {
        Self(Arc::new(Inner { engine: RwLock::new(None), load_error: RwLock::new(None), started: Instant::now() }))
    }

    pub fn ready(engine: Engine) -> Self {
        let s = Self::loading();
        s.set_engine(engine);
        s
    }

    /// Swaps in a new engine; in-flight requests finish on the old one.
    pub fn set_engine(&self, engine: Engine) {
        *self.0.engine.write() = Some(Arc::new(engine));
        *self.0.load_error.write() = None;
    }

    pub fn set_load_error(&self, message: String) {
        *self.0.load_error.write() = Some(message);
    }

    pub fn engine(&self) -> Option<Arc<Engine>> {
        self.0.engine.read().clone()
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/query", post(query))
        .route("/api/filters", get(filters))
        .route("/api/session/new", post(new_session))
        .route("/api/initiatives", get(initiatives))
        .route("/healthz", get(healthz))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

/// Converts an API query into an engine request, checking every filter
/// value against the vocabulary.
pub fn to_request(q: &ApiQuery, vocab: &Vocabularies, default_k: usize) -> Result<QueryRequest, ApiError> {
    let mut whom = BTreeSet::new();
    let mut bad_whom = Vec::new();
    for w in &q.whom {
        match w.parse::<StakeholderGroup>() {
            Ok(g) => {
                whom.insert(g);
            }
            Err(_) => bad_whom.push(w.clone()),
        }
    }
    if !bad_whom.is_empty() {
        let mut valid: Vec<&str> = StakeholderGroup::ALL.iter().map(|g| g.as_str()).collect();
        valid.sort_unstable();
        return Err(ApiError::validation(format!("unknown whom value(s): {}", bad_whom.join(", ")))
            .with_details(json!({ "field": "whom", "invalid": bad_whom, "valid": valid })));
    }
    let bad_about: Vec<String> = q.about.iter().filter(|a| !vocab.about.contains(a)).cloned().collect();
    if !bad_about.is_empty() {
        return Err(ApiError::validation(format!("unknown about value(s): {}", bad_about.join(", ")))
            .with_details(json!({ "field": "about", "invalid": bad_about, "valid": vocab.about })));
    }
    let req = QueryRequest {
        question: q.question.clone(),
        whom: (!whom.is_empty()).then_some(whom),
        about: (!q.about.is_empty()).then(|| q.about.iter().cloned().collect()),
        k: q.k.unwrap_or(default_k),
        answer_language: q.language.clone(),
    };
    req.validate().map_err(ApiError::validation)?;
    Ok(req)
}

async fn query(State(state): State<AppState>, body: Bytes) -> Result<Json<ApiAnswer>, ApiError> {
    let started = Instant::now();
    let q: ApiQuery = serde_json::from_slice(&body)
        .map_err(|e| ApiError::validation(format!("request body is not a valid query: {e}")))?;
    let engine = state.engine().ok_or_else(ApiError::not_ready)?;
    let req = to_request(&q, &engine.corpus().vocabularies(), engine.settings().default_k)?;
    let outcome = engine.answer(&req).await.map_err(|e| {
        tracing::warn!(error = %e, "query failed");
        ApiError::from(e)
    })?;
    Ok(Json(ApiAnswer { outcome, query_echo: q, timing_ms: started.elapsed().as_secs_f64() * 1000.0 }))
}

async fn filters(State(state): State<AppState>) -> Result<Json<Vocabularies>, ApiError> {
    let engine = state.engine().ok_or_else(ApiError::not_ready)?;
    Ok(Json(engine.corpus().vocabularies()))
}

async fn new_session() -> Json<SessionResponse> {
    Json(SessionResponse { session_id: uuid::Uuid::new_v4().to_string() })
}

async fn initiatives(State(state): State<AppState>) -> Json<Vec<InitiativeSummary>> {
    Json(state.engine().map(|e| e.corpus().initiatives()).unwrap_or_default())
}

async fn healthz(State(state): State<AppState>) -> Json<Health> {
    let uptime_secs = state.0.started.elapsed().as_secs();
    let load_error = state.0.load_error.read().clone();
    Json(match state.engine() {
        Some(e) => {
            let (dim, size) = {
                let ix = e.index().read();
                (ix.dim(), ix.len())
            };
            let generation = match e.generator() {
                crate::pipeline::Generator::Extractive => "extractive".to_string(),
                crate::pipeline::Generator::Provider(p) => p.describe(),
            };
            Health {
                status: "ok".into(),
                corpus_records: Some(e.corpus().len()),
                index_dim: Some(dim),
                index_size: Some(size),
                embedding: Some(ProviderStatus {
                    describe: e.embedder().describe(),
                    reachability: e.embedder_reachability(),
                }),
                generation: Some(ProviderStatus { describe: generation, reachability: e.generator_reachability() }),
                load_error,
                uptime_secs,
            }
        }
        None => Health {
            status: "degraded".into(),
            corpus_records: None,
            index_dim: None,
            index_size: None,
            embedding: None,
            generation: None,
            load_error,
            uptime_secs,
        },
    })
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error("cannot bind {addr}: {source}")]
    Bind { addr: String, source: std::io::Error },
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

/// Binds, starts answering at once (degraded until the engine is built in
/// the background) and drains in-flight requests on Ctrl-C or SIGTERM.
pub async fn serve(cfg: Config) -> Result<(), ServeError> {
    let listener = tokio::net::TcpListener::bind(&cfg.server.bind)
        .await
        .map_err(|source| ServeError::Bind { addr: cfg.server.bind.clone(), source })?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    let state = AppState::loading();
    let loader = state.clone();
    tokio::spawn(async move {
        let t = Instant::now();
        match cfg.build_engine().await {
            Ok(engine) => {
                tracing::info!(records = engine.corpus().len(), elapsed = ?t.elapsed(), "engine ready");
                loader.set_engine(engine);
            }
            Err(e) => {
                tracing::error!(error = %e, "engine failed to load");
                loader.set_load_error(e.to_string());
            }
        }
    });
    axum::serve(listener, router(state)).with_graceful_shutdown(shutdown_signal()).await?;
    Ok(())
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {}
        _ = term => {}
    }
    tracing::info!("shutting down, draining in-flight requests");
}
