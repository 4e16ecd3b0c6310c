//! Engines over the fixture corpus or small hand-made corpora.

use std::sync::Arc;

use async_trait::async_trait;
use chrono::TimeZone;

use consultrag::answer::{ChatMessage, ChatProvider, ProviderError};
use consultrag::embedding::{EmbeddingProvider, LocalHashEmbedder, DEFAULT_DIM};
use consultrag::ingest::store::read_records;
use consultrag::ingest::{FeedbackRecord, StakeholderGroup};
use consultrag::pipeline::{Corpus, Engine, EngineSettings, Generator};

pub fn local_embedder() -> Arc<dyn EmbeddingProvider> {
    Arc::new(LocalHashEmbedder::new(DEFAULT_DIM, 64).unwrap())
}

pub fn fixture_corpus() -> Corpus {
    Corpus::new(read_records(&super::fixture("corpus.jsonl")).unwrap())
}

pub async fn engine_with(corpus: Corpus, generator: Generator) -> Engine {
    Engine::build(corpus, local_embedder(), generator, None, EngineSettings::default()).await.unwrap()
}

pub async fn fixture_engine() -> Engine {
    engine_with(fixture_corpus(), Generator::Extractive).await
}

pub fn record(
    id: &str,
    initiative: &str,
    group: StakeholderGroup,
    country: &str,
    topic: &str,
    text: &str,
) -> FeedbackRecord {
    FeedbackRecord {
        record_id: id.into(),
        initiative_id: initiative.into(),
        initiative_title: format!("Initiative {initiative}"),
        topic: topic.into(),
        stakeholder_group: group,
        organization_name: None,
        country: country.into(),
        language: "en".into(),
        submitted_at: chrono::Utc.with_ymd_and_hms(2023, 5, 1, 12, 0, 0).unwrap(),
        text: text.into(),
    }
}

/// Chat provider that always fails.
pub struct Down {
    pub retriable: bool,
}

#[async_trait]
impl ChatProvider for Down {
    fn describe(&self) -> String {
        "down".into()
    }

    async fn complete(&self, _: &[ChatMessage]) -> Result<String, ProviderError> {
        Err(ProviderError { message: "connection refused".into(), retriable: self.retriable })
    }
}

/// Chat provider that answers every prompt with the same text.
pub struct Fixed(pub String);

#[async_trait]
impl ChatProvider for Fixed {
    fn describe(&self) -> String {
        "fixed".into()
    }

    async fn complete(&self, _: &[ChatMessage]) -> Result<String, ProviderError> {
        Ok(self.0.clone())
    }
}
