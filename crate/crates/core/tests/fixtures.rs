//! The committed fixture files are exactly what the seeded generator and the
//! importer produce. Set `CONSULTRAG_BLESS=1` to rewrite them.

mod support;

use std::collections::BTreeSet;

use consultrag::ingest::store::read_records;
use consultrag::ingest::{import_dump, CorpusStore, DumpFormat, IngestReport};
use support::{fixture, fixture_gen};

fn import_bytes(dump: &[u8]) -> (IngestReport, Vec<u8>) {
    let dir = tempfile::tempdir().unwrap();
    let dump_path = dir.path().join("dump.jsonl");
    std::fs::write(&dump_path, dump).unwrap();
    let store_path = dir.path().join("corpus.jsonl");
    let mut store = CorpusStore::open(&store_path).unwrap();
    let report = import_dump(&dump_path, DumpFormat::JsonLines, &mut store).unwrap();
    (report, std::fs::read(&store_path).unwrap())
}

fn check_or_bless(name: &str, bytes: &[u8]) {
    let path = fixture(name);
    if std::env::var_os("CONSULTRAG_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, bytes).unwrap();
        return;
    }
    let committed = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(committed == bytes, "{name} is stale; rerun with CONSULTRAG_BLESS=1");
}

#[test]
fn committed_fixtures_are_current() {
    let dump = fixture_gen::feedback_dump();
    let (report, corpus) = import_bytes(&dump);
    check_or_bless("feedback_dump.jsonl", &dump);
    check_or_bless("corpus.jsonl", &corpus);
    check_or_bless("dump_100.jsonl", &fixture_gen::dump_100());
    assert!(report.is_consistent());
    assert_eq!(report.rejected, 6, "{report:?}");
}

#[test]
fn fixture_corpus_meets_scale_floor() {
    let records = read_records(&fixture("corpus.jsonl")).unwrap();
    let count = |f: &dyn Fn(&consultrag::ingest::FeedbackRecord) -> String| {
        records.iter().map(f).collect::<BTreeSet<_>>().len()
    };
    assert!(records.len() >= 1000, "{}", records.len());
    assert!(count(&|r| r.initiative_id.clone()) >= 3);
    assert!(count(&|r| r.stakeholder_group.to_string()) >= 5);
    assert!(count(&|r| r.country.clone()) >= 6);
    assert!(count(&|r| r.language.clone()) >= 4);
}

#[test]
fn detector_agrees_with_declared_fixture_languages() {
    use consultrag::ingest::language::detect_language;
    use consultrag::ingest::normalize::clean_text;
    let dump = String::from_utf8_lossy(&fixture_gen::feedback_dump()).into_owned();
    let (mut total, mut wrong) = (0, Vec::new());
    for line in dump.lines() {
        let Ok(v) = serde_json::from_str::<serde_json::Value>(line) else { continue };
        let (Some(lang), Some(text)) = (v["language"].as_str(), v["text"].as_str()) else { continue };
        total += 1;
        let got = detect_language(&clean_text(text));
        if got != lang {
            wrong.push(format!("{lang}->{got}: {text}"));
        }
    }
    assert!(total > 1000);
    assert!(wrong.is_empty(), "{} of {total} misdetected, e.g. {:?}", wrong.len(), &wrong[..wrong.len().min(5)]);
}
