//! Imports a JSON-lines dump into a corpus store and prints the report.
//!
//! cargo run --example import_dump -- [DUMP] [STORE]

use std::path::PathBuf;

use consultrag::ingest::{import_dump, CorpusStore, DumpFormat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dump = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/dump_100.jsonl"));
    let tmp = tempfile_dir();
    let store_path = args.next().map(PathBuf::from).unwrap_or_else(|| tmp.join("corpus.jsonl"));

    let mut store = CorpusStore::open(&store_path)?;
    let first = import_dump(&dump, DumpFormat::JsonLines, &mut store)?;
    println!("first import:  {}", serde_json::to_string(&first)?);

    // Importing the same dump again changes nothing.
    let second = import_dump(&dump, DumpFormat::JsonLines, &mut store)?;
    println!("second import: {}", serde_json::to_string(&second)?);
    println!("{} records in {}", store.len(), store_path.display());
    Ok(())
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("consultrag-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}
