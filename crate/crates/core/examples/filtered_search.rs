//! Exact filtered top-K over the fixture corpus, then country re-ranking.

use std::path::Path;

use consultrag::embedding::{embed_one, LocalHashEmbedder, DEFAULT_DIM};
use consultrag::index::{rerank_diverse, Filter, ScoredHit};
use consultrag::ingest::store::read_records;
use consultrag::ingest::StakeholderGroup;
use consultrag::pipeline::{build_index, Corpus};

fn show(label: &str, hits: &[ScoredHit]) {
    println!("{label}");
    for h in hits {
        println!("  {:>2}. {:.4} {} {:<16} {}", h.rank, h.score, h.record_id, h.meta.stakeholder_group, h.meta.country);
    }
}

#[tokio::main(flavor = "current_thread")]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = Corpus::new(read_records(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus.jsonl"))?);
    let embedder = LocalHashEmbedder::new(DEFAULT_DIM, 64)?;
    let index = build_index(&corpus, &embedder).await?;
    println!("{} records indexed at dim {}", index.len(), index.dim());

    let q = embed_one(&embedder, "Should reusable packaging be mandatory for take-away food?").await?.vector;
    let all = index.search(&q, 10, &Filter::default())?;
    show(&format!("no filter ({} of {} match)", all.matched, all.scanned), &all.hits);

    let filter = Filter::default().whom([StakeholderGroup::Ngo, StakeholderGroup::Company]).about(["environment"]);
    let some = index.search(&q, 10, &filter)?;
    show(&format!("whom=ngo,company about=environment ({} match)", some.matched), &some.hits);

    show("re-ranked: at most 1 per country, 5 hits", &rerank_diverse(&some.hits, 1, 5));
    Ok(())
}
