use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::index::{ChunkMeta, ScoredHit};
use crate::ingest::language::canonical_language;
use crate::ingest::{FeedbackRecord, StakeholderGroup};

pub const MAX_QUESTION_CHARS: usize = 2000;
pub const DEFAULT_K: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRequest {
    pub question: String,
    #[serde(default)]
    pub whom: Option<BTreeSet<StakeholderGroup>>,
    #[serde(default)]
    pub about: Option<BTreeSet<String>>,
    #[serde(default = "default_k")]
    pub k: usize,
    /// Defaults to the detected language of the question.
    #[serde(default)]
    pub answer_language: Option<String>,
}

fn default_k() -> usize {
    DEFAULT_K
}

impl QueryRequest {
    pub fn new(question: impl Into<String>) -> Self {
        Self { question: question.into(), whom: None, about: None, k: DEFAULT_K, answer_language: None }
    }

    pub fn validate(&self) -> Result<(), String> {
        let q = self.question.trim();
        if q.is_empty() {
            return Err("question must not be empty".into());
        }
        if self.question.chars().count() > MAX_QUESTION_CHARS {
            return Err(format!("question exceeds {MAX_QUESTION_CHARS} characters"));
        }
        if self.k == 0 {
            return Err("k must be positive".into());
        }
        if let Some(lang) = &self.answer_language {
            if canonical_language(lang).is_none() {
                return Err(format!("`{lang}` is not an official EU language code"));
            }
        }
        Ok(())
    }
}

/// One retrieved record, possibly cut to fit the evidence budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceItem {
    pub record_id: String,
    pub score: f64,
    pub rank: usize,
    pub meta: ChunkMeta,
    pub initiative_title: String,
    pub organization_name: Option<String>,
    pub text: String,
    pub excerpt_truncated: bool,
}

impl EvidenceItem {
    pub fn from_hit(hit: &ScoredHit, record: &FeedbackRecord) -> Self {
        Self {
            record_id: hit.record_id.clone(),
            score: hit.score,
            rank: hit.rank,
            meta: hit.meta.clone(),
            initiative_title: record.initiative_title.clone(),
            organization_name: record.organization_name.clone(),
            text: record.text.clone(),
            excerpt_truncated: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EvidenceBundle {
    pub items: Vec<EvidenceItem>,
    pub total_char_budget: usize,
    pub truncation_applied: bool,
}

impl EvidenceBundle {
    pub fn ids(&self) -> BTreeSet<&str> {
        self.items.iter().map(|i| i.record_id.as_str()).collect()
    }

    pub fn groups(&self) -> BTreeSet<StakeholderGroup> {
        self.items.iter().map(|i| i.meta.stakeholder_group).collect()
    }

    pub fn get(&self, record_id: &str) -> Option<&EvidenceItem> {
        self.items.iter().find(|i| i.record_id == record_id)
    }

    pub fn total_chars(&self) -> usize {
        self.items.iter().map(|i| i.text.chars().count()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceRef {
    pub record_id: String,
    pub initiative_title: String,
    pub stakeholder_group: StakeholderGroup,
    #[serde(default)]
    pub organization_name: Option<String>,
    pub country: String,
    /// Language of the excerpt, which is never translated by default.
    pub language: String,
    pub excerpt: String,
}

/// Maximum characters of a source excerpt shown alongside an answer.
pub const SOURCE_EXCERPT_CHARS: usize = 300;

impl SourceRef {
    pub fn from_evidence(item: &EvidenceItem) -> Self {
        Self {
            record_id: item.record_id.clone(),
            initiative_title: item.initiative_title.clone(),
            stakeholder_group: item.meta.stakeholder_group,
            organization_name: item.organization_name.clone(),
            country: item.meta.country.clone(),
            language: item.meta.language.clone(),
            excerpt: super::text::shorten(&item.text, SOURCE_EXCERPT_CHARS),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InsufficiencyReason {
    NoHits,
    TooFewHits,
    LowScore,
}

/// The three-part answer plus its sources.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredAnswer {
    pub overview: String,
    pub group_insights: BTreeMap<StakeholderGroup, Vec<String>>,
    pub recommendations: Vec<String>,
    pub sources: Vec<SourceRef>,
    pub insufficient_evidence: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub insufficiency_reason: Option<InsufficiencyReason>,
    /// Language of overview, insights and recommendations.
    pub language: String,
    #[serde(default)]
    pub localization_failed: bool,
}

impl StructuredAnswer {
    pub fn insufficient(reason: InsufficiencyReason, language: &str) -> Self {
        Self {
            overview: String::new(),
            group_insights: BTreeMap::new(),
            recommendations: Vec::new(),
            sources: Vec::new(),
            insufficient_evidence: true,
            insufficiency_reason: Some(reason),
            language: language.to_string(),
            localization_failed: false,
        }
    }

    /// Checks the answer invariants against the evidence it was built from.
    pub fn check(&self, evidence: &EvidenceBundle) -> Result<(), Vec<String>> {
        let mut v = Vec::new();
        if self.insufficient_evidence {
            if !self.overview.is_empty() {
                v.push("refusal carries an overview".into());
            }
            if !self.group_insights.is_empty() {
                v.push("refusal carries group insights".into());
            }
            if !self.recommendations.is_empty() {
                v.push("refusal carries recommendations".into());
            }
            if !self.sources.is_empty() {
                v.push("refusal carries sources".into());
            }
        } else {
            if self.overview.trim().is_empty() {
                v.push("overview is empty".into());
            }
            if self.group_insights.is_empty() {
                v.push("no group insights".into());
            }
            let groups = evidence.groups();
            for (g, bullets) in &self.group_insights {
                if !groups.contains(g) {
                    v.push(format!("group `{g}` does not occur in the evidence"));
                }
                if bullets.is_empty() || bullets.iter().any(|b| b.trim().is_empty()) {
                    v.push(format!("group `{g}` has empty insights"));
                }
            }
            if !(2..=3).contains(&self.recommendations.len()) {
                v.push(format!("{} recommendations; expected 2 or 3", self.recommendations.len()));
            }
            if self.recommendations.iter().any(|r| r.trim().is_empty()) {
                v.push("empty recommendation".into());
            }
            if self.sources.is_empty() {
                v.push("no sources".into());
            }
            let ids = evidence.ids();
            for s in &self.sources {
                if !ids.contains(s.record_id.as_str()) {
                    v.push(format!("source `{}` is not in the evidence", s.record_id));
                }
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }
}
