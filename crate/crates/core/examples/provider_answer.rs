//! Answer generation through a chat provider, with envelope validation, one
//! re-prompt and translation. The "model" here is a stand-in that reads the
//! evidence list out of the prompt; swap in `RemoteChatProvider` for a real one.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use async_trait::async_trait;
use serde_json::{json, Value};

use consultrag::answer::{ChatMessage, ChatProvider, ProviderError, QueryRequest, Role};
use consultrag::embedding::{LocalHashEmbedder, DEFAULT_DIM};
use consultrag::ingest::store::read_records;
use consultrag::pipeline::{Corpus, Engine, EngineSettings, Generator};

/// Cites the evidence it is shown. Its first reply has four recommendations,
/// which the contract forbids, so the engine re-prompts once.
struct StandIn {
    calls: AtomicUsize,
}

#[async_trait]
impl ChatProvider for StandIn {
    fn describe(&self) -> String {
        "stand-in".into()
    }

    async fn complete(&self, messages: &[ChatMessage]) -> Result<String, ProviderError> {
        let n = self.calls.fetch_add(1, Ordering::SeqCst);
        let prompt = messages.iter().find(|m| m.role == Role::User).map(|m| m.content.as_str()).unwrap_or("");
        let items: Vec<(&str, &str)> = prompt
            .lines()
            .filter_map(|l| l.strip_prefix("[id="))
            .filter_map(|l| {
                let (id, rest) = l.split_once("] group=")?;
                Some((id, rest.split_whitespace().next()?))
            })
            .collect();
        let mut groups: Vec<&str> = items.iter().map(|(_, g)| *g).collect();
        groups.sort();
        groups.dedup();
        let insights: Vec<Value> = groups
            .iter()
            .map(|g| {
                let ids: Vec<&str> = items.iter().filter(|(_, ig)| ig == g).map(|(id, _)| *id).collect();
                json!({ "group": g, "points": [{ "text": format!("{} {g} submission(s) weigh in.", ids.len()), "sources": ids }] })
            })
            .collect();
        let rec = |t: &str| json!({ "text": t, "sources": [items[0].0] });
        let recs = if n == 0 {
            vec![rec("One."), rec("Two."), rec("Three."), rec("Four.")]
        } else {
            vec![rec("Phase the change in gradually."), rec("Publish an impact assessment first.")]
        };
        let ids: Vec<&str> = items.iter().map(|(id, _)| *id).collect();
        Ok(json!({
            "version": 1,
            "language": "en",
            "overview": format!("{} submissions address the question.", items.len()),
            "group_insights": insights,
            "recommendations": recs,
            "sources": ids,
        })
        .to_string())
    }
}

/// Marks every string it is given as translated.
struct Marker;

#[async_trait]
impl ChatProvider for Marker {
    fn describe(&self) -> String {
        "marker".into()
    }

    async fn complete(&self, messages: &[ChatMessage]) -> Result<String, ProviderError> {
        fn mark(v: &mut Value) {
            match v {
                Value::String(s) => *s = format!("[de] {s}"),
                Value::Array(a) => a.iter_mut().for_each(mark),
                Value::Object(o) => o.values_mut().for_each(mark),
                _ => {}
            }
        }
        let mut v: Value = serde_json::from_str(&messages[1].content)
            .map_err(|e| ProviderError { message: e.to_string(), retriable: false })?;
        mark(&mut v);
        Ok(v.to_string())
    }
}

#[tokio::main(flavor = "current_thread")]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus.jsonl");
    let model = Arc::new(StandIn { calls: AtomicUsize::new(0) });
    let engine = Engine::build(
        Corpus::new(read_records(&path)?),
        Arc::new(LocalHashEmbedder::new(DEFAULT_DIM, 64)?),
        Generator::Provider(model.clone()),
        Some(Arc::new(Marker)),
        EngineSettings::default(),
    )
    .await?;

    let out = engine.answer(&QueryRequest::new("Wie sollten Heizstoffe besteuert werden?")).await?;
    println!("provider calls: {} (first envelope rejected)", model.calls.load(Ordering::SeqCst));
    println!("{}", serde_json::to_string_pretty(&out.answer)?);
    Ok(())
}
