//! Saves an index, reloads it and checks that a query answers identically.

use consultrag::embedding::{embed_one, EmbeddingProvider, LocalHashEmbedder};
use consultrag::index::{Filter, VectorIndex};
use consultrag::ingest::store::read_records;
use consultrag::pipeline::{build_index, Corpus};

#[tokio::main(flavor = "current_thread")]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus.jsonl");
    let corpus = Corpus::new(read_records(&path)?);
    let embedder = LocalHashEmbedder::new(256, 64)?;
    let index = build_index(&corpus, &embedder).await?;

    let file = std::env::temp_dir().join(format!("consultrag-index-{}.bin", std::process::id()));
    index.save(&file)?;
    println!("wrote {} ({} bytes)", file.display(), std::fs::metadata(&file)?.len());

    let loaded = VectorIndex::load(&file, Some(embedder.dim()))?;
    let q = embed_one(&embedder, "taxation of aviation kerosene").await?.vector;
    let before = index.top_k(&q, 5, &Filter::default())?;
    let after = loaded.top_k(&q, 5, &Filter::default())?;
    assert_eq!(before, after);
    println!(
        "reloaded {} chunks; top-5 identical: {:?}",
        loaded.len(),
        after.iter().map(|h| &h.record_id).collect::<Vec<_>>()
    );

    match VectorIndex::load(&file, Some(1536)) {
        Err(e) => println!("loading with the wrong dim fails: {e}"),
        Ok(_) => unreachable!(),
    }
    std::fs::remove_file(&file)?;
    Ok(())
}
