use serde::{Deserialize, Serialize};

use super::text::{truncate_at_sentence, truncate_chars};
use super::types::{EvidenceBundle, EvidenceItem, InsufficiencyReason};
use crate::index::ScoredHit;

pub const DEFAULT_BUDGET_CHARS: usize = 12_000;

/// Packs evidence in rank order within `budget_chars` characters of text.
///
/// An item that does not fit is cut at the last sentence boundary that
/// does; if no sentence fits it is dropped. The rank-1 item is never
/// dropped: without a fitting sentence it is cut at the character budget.
pub fn build_evidence(items: Vec<EvidenceItem>, budget_chars: usize) -> EvidenceBundle {
    let mut remaining = budget_chars;
    let mut out = Vec::with_capacity(items.len());
    let mut truncation_applied = false;
    for (pos, mut item) in items.into_iter().enumerate() {
        let len = item.text.chars().count();
        if len <= remaining {
            remaining -= len;
            out.push(item);
            continue;
        }
        truncation_applied = true;
        let mut cut = truncate_at_sentence(&item.text, remaining);
        if cut.is_empty() && pos == 0 {
            cut = truncate_chars(&item.text, remaining);
        }
        if cut.is_empty() && pos != 0 {
            continue;
        }
        let cut = cut.to_string();
        remaining -= cut.chars().count();
        item.text = cut;
        item.excerpt_truncated = true;
        out.push(item);
    }
    EvidenceBundle { items: out, total_char_budget: budget_chars, truncation_applied }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SufficiencyPolicy {
    pub min_score: f64,
    pub min_hits: usize,
}

impl Default for SufficiencyPolicy {
    fn default() -> Self {
        Self { min_score: 0.25, min_hits: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sufficiency {
    Sufficient,
    Insufficient(InsufficiencyReason),
}

/// Sufficient iff at least `min_hits` hits score at least `min_score`.
pub fn check_sufficiency(hits: &[ScoredHit], policy: &SufficiencyPolicy) -> Sufficiency {
    if hits.is_empty() {
        return Sufficiency::Insufficient(InsufficiencyReason::NoHits);
    }
    if hits.len() < policy.min_hits {
        return Sufficiency::Insufficient(InsufficiencyReason::TooFewHits);
    }
    let strong = hits.iter().filter(|h| h.score >= policy.min_score).count();
    if strong >= policy.min_hits {
        Sufficiency::Sufficient
    } else {
        Sufficiency::Insufficient(InsufficiencyReason::LowScore)
    }
}
