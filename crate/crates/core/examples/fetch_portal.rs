//! Pulls one initiative's feedback from a portal endpoint and ingests it.
//!
//! cargo run --example fetch_portal -- BASE_URL INITIATIVE_ID [STORE]

use futures::StreamExt;

use consultrag::ingest::{ingest_normalized, CorpusStore, FeedbackClient, FetchConfig};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let (Some(base_url), Some(id)) = (args.next(), args.next()) else {
        eprintln!("usage: fetch_portal BASE_URL INITIATIVE_ID [STORE]");
        std::process::exit(2);
    };
    let mut store = match args.next() {
        Some(p) => CorpusStore::open(p)?,
        None => CorpusStore::in_memory(),
    };

    let client = FeedbackClient::new(FetchConfig { base_url, ..FetchConfig::default() })?;
    let meta = client.initiative(&id).await?;
    println!("{}: {} ({})", meta.initiative_id, meta.title, meta.topic);

    let mut stream = client.feedback_stream(&id, 50);
    let mut candidates = Vec::new();
    while let Some(item) = stream.next().await {
        match item {
            Ok(raw) => candidates.push(Ok((raw, meta.clone()))),
            Err(e) => {
                eprintln!("stopped: {e} (resume from page {:?})", e.cursor());
                break;
            }
        }
    }
    let report = ingest_normalized(candidates, &mut store)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
