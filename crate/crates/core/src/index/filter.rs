use std::collections::BTreeSet;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::ingest::{FeedbackRecord, StakeholderGroup};

/// Metadata carried by every indexed chunk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkMeta {
    pub initiative_id: String,
    pub topic: String,
    pub stakeholder_group: StakeholderGroup,
    pub country: String,
    pub language: String,
    pub submitted_at: DateTime<Utc>,
}

impl From<&FeedbackRecord> for ChunkMeta {
    fn from(r: &FeedbackRecord) -> Self {
        Self {
            initiative_id: r.initiative_id.clone(),
            topic: r.topic.clone(),
            stakeholder_group: r.stakeholder_group,
            country: r.country.clone(),
            language: r.language.clone(),
            submitted_at: r.submitted_at,
        }
    }
}

/// Conjunctive metadata filter. `None` or an empty set leaves a field
/// unconstrained.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Filter {
    pub whom: Option<BTreeSet<StakeholderGroup>>,
    pub about: Option<BTreeSet<String>>,
    pub country: Option<BTreeSet<String>>,
    pub language: Option<BTreeSet<String>>,
    pub initiative: Option<BTreeSet<String>>,
}

fn admits<T: Ord>(set: &Option<BTreeSet<T>>, value: &T) -> bool {
    match set {
        Some(s) if !s.is_empty() => s.contains(value),
        _ => true,
    }
}

fn active<T>(set: &Option<BTreeSet<T>>) -> bool {
    set.as_ref().is_some_and(|s| !s.is_empty())
}

impl Filter {
    pub fn matches(&self, meta: &ChunkMeta) -> bool {
        admits(&self.whom, &meta.stakeholder_group)
            && admits(&self.about, &meta.topic)
            && admits(&self.country, &meta.country)
            && admits(&self.language, &meta.language)
            && admits(&self.initiative, &meta.initiative_id)
    }

    pub fn is_unconstrained(&self) -> bool {
        !(active(&self.whom)
            || active(&self.about)
            || active(&self.country)
            || active(&self.language)
            || active(&self.initiative))
    }

    pub fn constrains_country(&self) -> bool {
        active(&self.country)
    }

    pub fn whom<I: IntoIterator<Item = StakeholderGroup>>(mut self, groups: I) -> Self {
        self.whom = Some(groups.into_iter().collect());
        self
    }

    pub fn about<I: IntoIterator<Item = S>, S: Into<String>>(mut self, topics: I) -> Self {
        self.about = Some(topics.into_iter().map(Into::into).collect());
        self
    }

    pub fn country<I: IntoIterator<Item = S>, S: Into<String>>(mut self, countries: I) -> Self {
        self.country = Some(countries.into_iter().map(Into::into).collect());
        self
    }

    pub fn language<I: IntoIterator<Item = S>, S: Into<String>>(mut self, langs: I) -> Self {
        self.language = Some(langs.into_iter().map(Into::into).collect());
        self
    }

    pub fn initiative<I: IntoIterator<Item = S>, S: Into<String>>(mut self, ids: I) -> Self {
        self.initiative = Some(ids.into_iter().map(Into::into).collect());
        self
    }
}
