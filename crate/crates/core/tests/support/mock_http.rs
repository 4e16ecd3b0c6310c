//! In-process HTTP mocks bound to an ephemeral loopback port.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::{json, Value};

pub async fn spawn(app: Router) -> String {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    format!("http://{addr}")
}

/// Portal state: initiatives with their feedback items, in source order.
#[derive(Default)]
pub struct Portal {
    pub initiatives: HashMap<String, (Value, Vec<Value>)>,
    /// Page that answers 503.
    pub failing_page: Option<usize>,
    pub page_delay: Duration,
    pub in_flight: AtomicUsize,
    pub max_in_flight: AtomicUsize,
    pub page_requests: AtomicUsize,
}

const USER_TYPES: [&str; 5] = ["EU_CITIZEN", "NGO", "COMPANY", "ACADEMIC_RESEARCH_INSTITTUTION", "PUBLIC_AUTHORITY"];
const ALPHA3: [&str; 6] = ["DEU", "FRA", "ESP", "ITA", "POL", "SWE"];

pub fn portal_item(i: usize) -> Value {
    json!({
        "id": 10_000 + i,
        "feedback": format!("<p>Feedback item {i} on the proposal&nbsp;text.</p>"),
        "userType": USER_TYPES[i % 5],
        "country": ALPHA3[i % 6],
        "language": "EN",
        "dateFeedback": format!("2023/04/{:02} 09:30:00", 1 + i % 28),
    })
}

impl Portal {
    pub fn with(mut self, id: &str, items: Vec<Value>) -> Self {
        let meta = json!({ "id": id, "title": format!("Initiative {id}"), "topic": "energy" });
        self.initiatives.insert(id.to_string(), (meta, items));
        self
    }

    pub fn router(self: Arc<Self>) -> Router {
        Router::new()
            .route("/initiatives/{id}", get(initiative))
            .route("/initiatives/{id}/feedback", get(feedback))
            .with_state(self)
    }
}

async fn initiative(State(p): State<Arc<Portal>>, Path(id): Path<String>) -> Response {
    match p.initiatives.get(&id) {
        Some((meta, _)) => Json(meta.clone()).into_response(),
        None => StatusCode::NOT_FOUND.into_response(),
    }
}

async fn feedback(
    State(p): State<Arc<Portal>>,
    Path(id): Path<String>,
    Query(q): Query<HashMap<String, usize>>,
) -> Response {
    let Some((_, items)) = p.initiatives.get(&id) else {
        return StatusCode::NOT_FOUND.into_response();
    };
    p.page_requests.fetch_add(1, Ordering::SeqCst);
    let now = p.in_flight.fetch_add(1, Ordering::SeqCst) + 1;
    p.max_in_flight.fetch_max(now, Ordering::SeqCst);
    tokio::time::sleep(p.page_delay).await;
    p.in_flight.fetch_sub(1, Ordering::SeqCst);

    let (page, size) = (q["page"], q["size"]);
    if p.failing_page == Some(page) {
        return StatusCode::SERVICE_UNAVAILABLE.into_response();
    }
    let total_pages = items.len().div_ceil(size);
    let slice: Vec<Value> = items.iter().skip(page * size).take(size).cloned().collect();
    Json(json!({
        "_embedded": { "feedback": slice },
        "page": { "number": page, "size": size, "totalElements": items.len(), "totalPages": total_pages },
    }))
    .into_response()
}

/// Serves a recorded portal session from `fixtures/replay/<id>/`.
pub fn replay_router() -> Router {
    Router::new()
        .route("/initiatives/{id}", get(replay_initiative))
        .route("/initiatives/{id}/feedback", get(replay_feedback))
}

fn replay_dir(id: &str) -> PathBuf {
    super::fixture("replay").join(id)
}

fn replay_file(path: PathBuf) -> Response {
    match std::fs::read(&path) {
        Ok(bytes) => ([("content-type", "application/json")], bytes).into_response(),
        Err(_) => StatusCode::NOT_FOUND.into_response(),
    }
}

async fn replay_initiative(Path(id): Path<String>) -> Response {
    replay_file(replay_dir(&id).join("initiative.json"))
}

async fn replay_feedback(Path(id): Path<String>, Query(q): Query<HashMap<String, usize>>) -> Response {
    replay_file(replay_dir(&id).join(format!("feedback-page{}-size{}.json", q["page"], q["size"])))
}

/// Embeddings endpoint answering `dim`-sized vectors derived from the text
/// length, after failing the first `fail_first` calls with a 500.
#[derive(Default)]
pub struct Embeddings {
    pub dim: usize,
    pub fail_first: usize,
    pub calls: AtomicUsize,
    /// Reply in the `{"data": [{"embedding", "index"}]}` shape, reversed.
    pub openai_shape: bool,
}

impl Embeddings {
    pub fn router(self: Arc<Self>) -> Router {
        Router::new().route("/v1/embeddings", post(embed)).with_state(self)
    }
}

async fn embed(State(e): State<Arc<Embeddings>>, Json(body): Json<Value>) -> Response {
    let n = e.calls.fetch_add(1, Ordering::SeqCst);
    if n < e.fail_first {
        return StatusCode::INTERNAL_SERVER_ERROR.into_response();
    }
    let inputs: Vec<String> = serde_json::from_value(body["input"].clone()).unwrap();
    let vecs: Vec<Vec<f64>> =
        inputs.iter().map(|t| (0..e.dim).map(|j| ((t.len() + j) % 7) as f64 + 1.0).collect()).collect();
    if e.openai_shape {
        let mut data: Vec<Value> =
            vecs.into_iter().enumerate().map(|(i, v)| json!({ "embedding": v, "index": i })).collect();
        data.reverse();
        Json(json!({ "data": data })).into_response()
    } else {
        Json(json!({ "embeddings": vecs })).into_response()
    }
}

/// Chat-completions endpoint replaying `replies` in order; a reply of
/// `Err(status)` answers with that status. The last reply repeats.
pub struct Chat {
    pub replies: Vec<Result<String, u16>>,
    pub calls: AtomicUsize,
    pub requests: parking_lot::Mutex<Vec<Value>>,
}

impl Chat {
    pub fn new(replies: Vec<Result<String, u16>>) -> Self {
        Self { replies, calls: AtomicUsize::new(0), requests: Default::default() }
    }

    pub fn router(self: Arc<Self>) -> Router {
        Router::new().route("/v1/chat/completions", post(chat)).with_state(self)
    }
}

async fn chat(State(c): State<Arc<Chat>>, Json(body): Json<Value>) -> Response {
    c.requests.lock().push(body);
    let n = c.calls.fetch_add(1, Ordering::SeqCst);
    match &c.replies[n.min(c.replies.len() - 1)] {
        Ok(content) => Json(json!({
            "id": format!("cmpl-{n}"),
            "choices": [{ "index": 0, "message": { "role": "assistant", "content": content }, "finish_reason": "stop" }],
        }))
        .into_response(),
        Err(status) => StatusCode::from_u16(*status).unwrap().into_response(),
    }
}
