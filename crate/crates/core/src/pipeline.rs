//! The query pipeline: embed, filtered top-K, diversity re-rank, sufficiency
//! gate, evidence packing, generation and localization.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::answer::extractive::EXTRACTIVE_LANGUAGE;
use crate::answer::{
    build_evidence, check_sufficiency, extractive_answer, generate_answer, localize, AnswerError, ChatProvider,
    EvidenceItem, QueryRequest, StructuredAnswer, Sufficiency, SufficiencyPolicy, DEFAULT_BUDGET_CHARS, DEFAULT_K,
};
use crate::embedding::{embed_all, embed_one, EmbeddingError, EmbeddingProvider};
use crate::index::{
    rerank_with, ChunkMeta, DiversityConfig, Filter, IndexError, IndexedChunk, SharedIndex, VectorIndex,
};
use crate::ingest::language::{detect_language, UNKNOWN};
use crate::ingest::{FeedbackRecord, StakeholderGroup};

/// Normalized records with lookup by id.
#[derive(Debug, Default)]
pub struct Corpus {
    records: Vec<FeedbackRecord>,
    by_id: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Vocabularies {
    pub whom: Vec<StakeholderGroup>,
    pub about: Vec<String>,
    pub countries: Vec<String>,
    pub languages: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitiativeSummary {
    pub initiative_id: String,
    pub title: String,
    pub topic: String,
    pub records: usize,
}

impl Corpus {
    pub fn new(records: Vec<FeedbackRecord>) -> Self {
        let by_id = records.iter().enumerate().map(|(i, r)| (r.record_id.clone(), i)).collect();
        Self { records, by_id }
    }

    pub fn records(&self) -> &[FeedbackRecord] {
        &self.records
    }

    pub fn get(&self, record_id: &str) -> Option<&FeedbackRecord> {
        self.by_id.get(record_id).map(|&i| &self.records[i])
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Filter vocabularies as they occur in the data, sorted and unique.
    pub fn vocabularies(&self) -> Vocabularies {
        let mut whom = BTreeSet::new();
        let mut about = BTreeSet::new();
        let mut countries = BTreeSet::new();
        let mut languages = BTreeSet::new();
        for r in &self.records {
            whom.insert(r.stakeholder_group);
            about.insert(r.topic.clone());
            countries.insert(r.country.clone());
            languages.insert(r.language.clone());
        }
        let mut whom: Vec<StakeholderGroup> = whom.into_iter().collect();
        whom.sort_by_key(|g| g.as_str());
        Vocabularies {
            whom,
            about: about.into_iter().collect(),
            countries: countries.into_iter().collect(),
            languages: languages.into_iter().collect(),
        }
    }

    /// Initiatives with record counts, by id. The title and topic are taken
    /// from the first record seen.
    pub fn initiatives(&self) -> Vec<InitiativeSummary> {
        let mut out: BTreeMap<&str, InitiativeSummary> = BTreeMap::new();
        for r in &self.records {
            out.entry(&r.initiative_id)
                .or_insert_with(|| InitiativeSummary {
                    initiative_id: r.initiative_id.clone(),
                    title: r.initiative_title.clone(),
                    topic: r.topic.clone(),
                    records: 0,
                })
                .records += 1;
        }
        out.into_values().collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// Embeds every record of `corpus` into a fresh index of the provider's dim.
pub async fn build_index(corpus: &Corpus, embedder: &dyn EmbeddingProvider) -> Result<VectorIndex, BuildError> {
    let texts: Vec<String> = corpus.records.iter().map(|r| r.text.clone()).collect();
    let embedded = embed_all(embedder, &texts).await?;
    let chunks = corpus
        .records
        .iter()
        .zip(embedded)
        .map(|(r, e)| IndexedChunk {
            record_id: r.record_id.clone(),
            vector: e.vector,
            meta: ChunkMeta::from(r),
            truncated: e.truncated,
        })
        .collect();
    let mut index = VectorIndex::new(embedder.dim());
    index.upsert_batch(chunks)?;
    Ok(index)
}

/// How answers are written.
#[derive(Clone)]
pub enum Generator {
    /// Deterministic English template over evidence sentences.
    Extractive,
    Provider(Arc<dyn ChatProvider>),
}

impl std::fmt::Debug for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Generator::Extractive => f.write_str("Extractive"),
            Generator::Provider(p) => write!(f, "Provider({})", p.describe()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineSettings {
    pub default_k: usize,
    pub diversity: DiversityConfig,
    pub sufficiency: SufficiencyPolicy,
    pub budget_chars: usize,
    pub translate_excerpts: bool,
}

impl Default for EngineSettings {
    fn default() -> Self {
        Self {
            default_k: DEFAULT_K,
            diversity: DiversityConfig::default(),
            sufficiency: SufficiencyPolicy::default(),
            budget_chars: DEFAULT_BUDGET_CHARS,
            translate_excerpts: false,
        }
    }
}

/// Counts after each retrieval stage; always `candidates >= after_filter >=
/// after_rerank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetrievalStats {
    pub candidates: usize,
    pub after_filter: usize,
    pub after_rerank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryOutcome {
    #[serde(flatten)]
    pub answer: StructuredAnswer,
    pub k_used: usize,
    pub retrieval_stats: RetrievalStats,
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("invalid query: {0}")]
    Invalid(String),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Answer(#[from] AnswerError),
}

impl EngineError {
    /// True for provider outages a client may retry.
    pub fn is_retriable(&self) -> bool {
        match self {
            EngineError::Embedding(e) => e.is_retriable(),
            EngineError::Answer(e) => e.is_retriable(),
            _ => false,
        }
    }
}

/// Last observed outcome of calls to a provider. Reading never blocks or
/// touches the network.
#[derive(Debug, Default)]
pub struct ProviderHealth(AtomicU8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reachability {
    Unknown,
    Ok,
    Failing,
    /// Runs in-process; nothing to reach.
    Local,
}

impl ProviderHealth {
    fn record<T, E>(&self, r: &Result<T, E>) {
        self.0.store(if r.is_ok() { 1 } else { 2 }, Ordering::Relaxed);
    }

    pub fn status(&self) -> Reachability {
        match self.0.load(Ordering::Relaxed) {
            1 => Reachability::Ok,
            2 => Reachability::Failing,
            _ => Reachability::Unknown,
        }
    }
}

pub struct Engine {
    corpus: Arc<Corpus>,
    index: SharedIndex,
    embedder: Arc<dyn EmbeddingProvider>,
    generator: Generator,
    translator: Option<Arc<dyn ChatProvider>>,
    settings: EngineSettings,
    embedder_health: ProviderHealth,
    generator_health: ProviderHealth,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine")
            .field("records", &self.corpus.len())
            .field("dim", &self.index.read().dim())
            .field("embedder", &self.embedder.describe())
            .field("generator", &self.generator)
            .finish()
    }
}

impl Engine {
    /// Fails if the index dimension differs from the embedder's.
    pub fn new(
        corpus: Arc<Corpus>,
        index: SharedIndex,
        embedder: Arc<dyn EmbeddingProvider>,
        generator: Generator,
        translator: Option<Arc<dyn ChatProvider>>,
        settings: EngineSettings,
    ) -> Result<Self, IndexError> {
        let dim = index.read().dim();
        if dim != embedder.dim() {
            return Err(IndexError::DimMismatch { expected: dim, actual: embedder.dim() });
        }
        Ok(Self {
            corpus,
            index,
            embedder,
            generator,
            translator,
            settings,
            embedder_health: ProviderHealth::default(),
            generator_health: ProviderHealth::default(),
        })
    }

    /// Embeds `corpus` and wires an engine around the fresh index.
    pub async fn build(
        corpus: Corpus,
        embedder: Arc<dyn EmbeddingProvider>,
        generator: Generator,
        translator: Option<Arc<dyn ChatProvider>>,
        settings: EngineSettings,
    ) -> Result<Self, BuildError> {
        let index = build_index(&corpus, embedder.as_ref()).await?;
        Ok(Self::new(Arc::new(corpus), SharedIndex::new(index), embedder, generator, translator, settings)?)
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn index(&self) -> &SharedIndex {
        &self.index
    }

    pub fn embedder(&self) -> &dyn EmbeddingProvider {
        self.embedder.as_ref()
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn settings(&self) -> &EngineSettings {
        &self.settings
    }

    pub fn embedder_reachability(&self) -> Reachability {
        if self.embedder.is_local() {
            Reachability::Local
        } else {
            self.embedder_health.status()
        }
    }

    pub fn generator_reachability(&self) -> Reachability {
        match self.generator {
            Generator::Extractive => Reachability::Local,
            Generator::Provider(_) => self.generator_health.status(),
        }
    }

    /// Requested answer language, else the question's detected language,
    /// else English.
    pub fn target_language(q: &QueryRequest) -> String {
        if let Some(lang) = q.answer_language.as_deref().and_then(crate::ingest::language::canonical_language) {
            return lang.to_string();
        }
        match detect_language(&q.question) {
            l if l == UNKNOWN => EXTRACTIVE_LANGUAGE.to_string(),
            l => l.to_string(),
        }
    }

    pub async fn answer(&self, q: &QueryRequest) -> Result<QueryOutcome, EngineError> {
        q.validate().map_err(EngineError::Invalid)?;
        let target = Self::target_language(q);

        let embedded = embed_one(self.embedder.as_ref(), &q.question).await;
        self.embedder_health.record(&embedded);
        let query = embedded?.vector;

        let filter = Filter { whom: q.whom.clone(), about: q.about.clone(), ..Filter::default() };
        let result = self.index.read().search(&query, q.k, &filter)?;
        let hits =
            if filter.constrains_country() { result.hits } else { rerank_with(&result.hits, &self.settings.diversity) };
        let stats =
            RetrievalStats { candidates: result.scanned, after_filter: result.matched, after_rerank: hits.len() };
        tracing::debug!(?stats, top = hits.first().map(|h| h.score), "retrieved");

        if let Sufficiency::Insufficient(reason) = check_sufficiency(&hits, &self.settings.sufficiency) {
            return Ok(QueryOutcome {
                answer: StructuredAnswer::insufficient(reason, &target),
                k_used: q.k,
                retrieval_stats: stats,
            });
        }

        let items = hits
            .iter()
            .filter_map(|h| match self.corpus.get(&h.record_id) {
                Some(r) => Some(EvidenceItem::from_hit(h, r)),
                None => {
                    tracing::warn!(record_id = %h.record_id, "indexed record missing from corpus");
                    None
                }
            })
            .collect();
        let evidence = build_evidence(items, self.settings.budget_chars);
        if evidence.is_empty() {
            return Err(IndexError::Corrupt("index and corpus disagree on every hit".into()).into());
        }

        let answer = match &self.generator {
            Generator::Extractive => extractive_answer(q, &evidence),
            Generator::Provider(p) => {
                let r = generate_answer(q, &evidence, &target, p.as_ref()).await;
                self.generator_health.record(&r);
                r?
            }
        };
        let answer = localize(answer, &target, self.translator.as_deref(), self.settings.translate_excerpts).await?;
        debug_assert!(answer.check(&evidence).is_ok());
        Ok(QueryOutcome { answer, k_used: q.k, retrieval_stats: stats })
    }
}
