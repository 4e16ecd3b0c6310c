//! Full question-answering pipeline with no network: local embeddings and
//! extractive answers.
//!
//! cargo run --example offline_answer -- "your question" [whom,...]

use std::sync::Arc;

use consultrag::answer::QueryRequest;
use consultrag::embedding::{LocalHashEmbedder, DEFAULT_DIM};
use consultrag::ingest::store::read_records;
use consultrag::ingest::StakeholderGroup;
use consultrag::pipeline::{Corpus, Engine, EngineSettings, Generator};

#[tokio::main(flavor = "current_thread")]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let question = args.next().unwrap_or_else(|| "How should high-risk AI systems be supervised?".into());
    let whom = args
        .next()
        .map(|s| s.split(',').map(|g| g.parse::<StakeholderGroup>()).collect::<Result<_, _>>())
        .transpose()?;

    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus.jsonl");
    let engine = Engine::build(
        Corpus::new(read_records(&path)?),
        Arc::new(LocalHashEmbedder::new(DEFAULT_DIM, 64)?),
        Generator::Extractive,
        None,
        EngineSettings::default(),
    )
    .await?;

    let mut req = QueryRequest::new(question);
    req.whom = whom;
    let outcome = engine.answer(&req).await?;
    println!("{}", serde_json::to_string_pretty(&outcome)?);

    let refusal = engine.answer(&QueryRequest::new("zzqv wkkp lorn")).await?;
    println!(
        "gibberish -> insufficient_evidence={} ({:?})",
        refusal.answer.insufficient_evidence, refusal.answer.insufficiency_reason
    );
    Ok(())
}
