//! Serves the HTTP API over the fixture corpus, fully offline.
//!
//! cargo run --example serve_fixture -- [ADDR]
//! curl -s localhost:8080/api/filters
//! curl -s localhost:8080/api/query -H 'content-type: application/json' \
//!      -d '{"question": "Should packaging be reusable?", "whom": ["ngo"]}'

use std::sync::Arc;

use consultrag::embedding::{LocalHashEmbedder, DEFAULT_DIM};
use consultrag::ingest::store::read_records;
use consultrag::pipeline::{Corpus, Engine, EngineSettings, Generator};
use consultrag::service::{router, AppState};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let addr = std::env::args().nth(1).unwrap_or_else(|| "127.0.0.1:8080".into());
    let listener = tokio::net::TcpListener::bind(&addr).await?;
    println!("listening on http://{}", listener.local_addr()?);

    // Requests are answered (degraded) while the index builds.
    let state = AppState::loading();
    let loader = state.clone();
    tokio::spawn(async move {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus.jsonl");
        let corpus = Corpus::new(read_records(&path).expect("fixture corpus"));
        let embedder = Arc::new(LocalHashEmbedder::new(DEFAULT_DIM, 64).expect("embedder"));
        match Engine::build(corpus, embedder, Generator::Extractive, None, EngineSettings::default()).await {
            Ok(engine) => loader.set_engine(engine),
            Err(e) => loader.set_load_error(e.to_string()),
        }
    });

    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
