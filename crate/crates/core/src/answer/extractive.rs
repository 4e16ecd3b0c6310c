//! Deterministic, provider-free answers assembled from evidence sentences.
//!
//! Output is English and a pure function of the question and the evidence,
//! so offline runs are byte-stable.

use std::collections::{BTreeMap, BTreeSet};

use super::text::{sentences, shorten};
use super::types::{EvidenceBundle, EvidenceItem, QueryRequest, SourceRef, StructuredAnswer};
use crate::ingest::normalize::UNKNOWN_COUNTRY;
use crate::ingest::StakeholderGroup;

pub const EXTRACTIVE_LANGUAGE: &str = "en";
const POINT_CHARS: usize = 240;
const MAX_POINTS_PER_GROUP: usize = 2;

fn tokens(s: &str) -> BTreeSet<String> {
    s.split(|c: char| !c.is_alphanumeric()).filter(|w| w.chars().count() >= 3).map(str::to_lowercase).collect()
}

/// Sentence of `text` sharing the most words with the question; the
/// earliest wins ties.
fn best_sentence<'a>(text: &'a str, question: &BTreeSet<String>) -> &'a str {
    fresh_sentence(text, question, &BTreeSet::new())
}

/// As [`best_sentence`], but a sentence in `used` loses to any unused one
/// that still shares a word with the question.
fn fresh_sentence<'a>(text: &'a str, question: &BTreeSet<String>, used: &BTreeSet<String>) -> &'a str {
    let mut best: Option<(&str, (bool, bool, usize))> = None;
    for s in sentences(text) {
        let overlap = tokens(s).intersection(question).count();
        let key = (overlap > 0, !used.contains(s), overlap);
        if best.is_none_or(|(_, k)| key > k) {
            best = Some((s, key));
        }
    }
    best.map_or(text.trim(), |(s, _)| s)
}

fn origin(item: &EvidenceItem) -> String {
    match item.meta.country.as_str() {
        UNKNOWN_COUNTRY => "country unknown".to_string(),
        c => c.to_string(),
    }
}

fn point(item: &EvidenceItem, q: &BTreeSet<String>, used: &mut BTreeSet<String>) -> String {
    let who = match &item.organization_name {
        Some(org) => format!("{org} ({})", origin(item)),
        None => format!("A respondent ({})", origin(item)),
    };
    let s = fresh_sentence(&item.text, q, used);
    used.insert(s.to_string());
    format!("{who}: \"{}\"", shorten(s, POINT_CHARS))
}

fn quoted(item: &EvidenceItem, q: &BTreeSet<String>, used: &mut BTreeSet<String>) -> String {
    let s = fresh_sentence(&item.text, q, used);
    used.insert(s.to_string());
    format!(
        "({}, {}): \"{}\"",
        item.meta.stakeholder_group.as_str().replace('_', " "),
        origin(item),
        shorten(s, POINT_CHARS)
    )
}

fn list(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

/// Builds an answer from `evidence`, which must not be empty.
pub fn extractive_answer(q: &QueryRequest, evidence: &EvidenceBundle) -> StructuredAnswer {
    assert!(!evidence.is_empty(), "extractive answers need evidence");
    let qt = tokens(&q.question);
    let items = &evidence.items;

    let groups: Vec<String> = evidence.groups().iter().map(|g| g.as_str().replace('_', " ")).collect();
    let countries: BTreeSet<&str> =
        items.iter().map(|i| i.meta.country.as_str()).filter(|c| *c != UNKNOWN_COUNTRY).collect();
    let topics: BTreeSet<&str> = items.iter().map(|i| i.meta.topic.as_str()).collect();
    let countries: Vec<String> = countries.into_iter().map(String::from).collect();
    let topics: Vec<String> = topics.into_iter().map(String::from).collect();
    let from = if countries.is_empty() { String::new() } else { format!(" in {}", list(&countries)) };
    let overview = format!(
        "{} feedback item{} on {} from {}{from} address the question. The most relevant submission states: \"{}\"",
        items.len(),
        if items.len() == 1 { "" } else { "s" },
        list(&topics),
        list(&groups),
        shorten(best_sentence(&items[0].text, &qt), POINT_CHARS),
    );

    // Repeated claims are common across submissions; later quotes prefer
    // sentences not yet shown.
    let mut used = BTreeSet::new();
    let mut group_insights: BTreeMap<StakeholderGroup, Vec<String>> = BTreeMap::new();
    for item in items {
        let points = group_insights.entry(item.meta.stakeholder_group).or_default();
        if points.len() < MAX_POINTS_PER_GROUP {
            points.push(point(item, &qt, &mut used));
        }
    }

    let mut used = BTreeSet::new();
    let mut recommendations = vec![format!(
        "Prioritise the point made in the most relevant submission {}",
        quoted(&items[0], &qt, &mut used)
    )];
    recommendations.push(match items.get(1) {
        Some(second) => {
            format!("Weigh it against the second most relevant submission {}", quoted(second, &qt, &mut used))
        }
        None => "Collect further feedback before acting, as only one submission supports this answer.".into(),
    });

    StructuredAnswer {
        overview,
        group_insights,
        recommendations,
        sources: items.iter().map(SourceRef::from_evidence).collect(),
        insufficient_evidence: false,
        insufficiency_reason: None,
        language: EXTRACTIVE_LANGUAGE.into(),
        localization_failed: false,
    }
}
