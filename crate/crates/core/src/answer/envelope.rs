//! The machine-parsable answer envelope a generation provider must emit
//! (schema in `docs/answer-envelope.md`).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::types::{EvidenceBundle, SourceRef, StructuredAnswer};
use crate::ingest::StakeholderGroup;

pub const ENVELOPE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub text: String,
    #[serde(default)]
    pub sources: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInsight {
    pub group: String,
    #[serde(default)]
    pub points: Vec<Claim>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub version: u32,
    #[serde(default)]
    pub language: Option<String>,
    pub overview: String,
    pub group_insights: Vec<GroupInsight>,
    pub recommendations: Vec<Claim>,
    pub sources: Vec<String>,
}

/// Extracts the JSON object from a provider message, tolerating Markdown
/// code fences and leading or trailing prose.
pub fn extract_json(raw: &str) -> Option<&str> {
    let start = raw.find('{')?;
    let end = raw.rfind('}')?;
    (end > start).then(|| &raw[start..=end])
}

/// Parses and validates an envelope against the evidence. On success the
/// returned answer satisfies every [`StructuredAnswer`] invariant.
pub fn parse_envelope(raw: &str, evidence: &EvidenceBundle, language: &str) -> Result<StructuredAnswer, Vec<String>> {
    let json = extract_json(raw).ok_or_else(|| vec!["response contains no JSON object".to_string()])?;
    let env: Envelope =
        serde_json::from_str(json).map_err(|e| vec![format!("envelope does not match the schema: {e}")])?;
    validate_envelope(&env, evidence, language)
}

pub fn validate_envelope(
    env: &Envelope,
    evidence: &EvidenceBundle,
    language: &str,
) -> Result<StructuredAnswer, Vec<String>> {
    let mut v = Vec::new();
    if env.version != ENVELOPE_VERSION {
        v.push(format!("version {} is not {ENVELOPE_VERSION}", env.version));
    }
    if env.overview.trim().is_empty() {
        v.push("overview is missing or empty".into());
    }

    let ids = evidence.ids();
    let evidence_groups = evidence.groups();
    let mut cited: Vec<&str> = Vec::new();
    let mut check_cites = |what: &str, sources: &[String], v: &mut Vec<String>| {
        for s in sources {
            if ids.contains(s.as_str()) {
                if !cited.contains(&s.as_str()) {
                    cited.push(ids.get(s.as_str()).copied().unwrap());
                }
            } else {
                v.push(format!("{what} cites `{s}`, which is not in the evidence"));
            }
        }
    };

    check_cites("sources", &env.sources, &mut v);
    if env.sources.is_empty() {
        v.push("sources list is empty".into());
    }

    let mut insights: BTreeMap<StakeholderGroup, Vec<String>> = BTreeMap::new();
    if env.group_insights.is_empty() {
        v.push("group_insights is missing or empty".into());
    }
    let mut seen = BTreeSet::new();
    for gi in &env.group_insights {
        let group = match gi.group.parse::<StakeholderGroup>() {
            Ok(g) => g,
            Err(_) => {
                v.push(format!("unknown stakeholder group `{}`", gi.group));
                continue;
            }
        };
        if !seen.insert(group) {
            v.push(format!("group `{group}` appears twice"));
        }
        if !evidence_groups.contains(&group) {
            v.push(format!("group `{group}` does not occur in the evidence"));
        }
        if gi.points.is_empty() {
            v.push(format!("group `{group}` has no points"));
        }
        for p in &gi.points {
            if p.text.trim().is_empty() {
                v.push(format!("group `{group}` has an empty point"));
            }
            check_cites(&format!("insight for `{group}`"), &p.sources, &mut v);
        }
        insights.insert(group, gi.points.iter().map(|p| p.text.trim().to_string()).collect());
    }

    let n = env.recommendations.len();
    if !(2..=3).contains(&n) {
        v.push(format!("{n} recommendations; exactly two or three are required"));
    }
    for (i, r) in env.recommendations.iter().enumerate() {
        if r.text.trim().is_empty() {
            v.push(format!("recommendation {} is empty", i + 1));
        }
        check_cites(&format!("recommendation {}", i + 1), &r.sources, &mut v);
    }

    if !v.is_empty() {
        return Err(v);
    }
    let sources = cited
        .into_iter()
        .map(|id| SourceRef::from_evidence(evidence.get(id).expect("cited ids come from the evidence")))
        .collect();
    let answer = StructuredAnswer {
        overview: env.overview.trim().to_string(),
        group_insights: insights,
        recommendations: env.recommendations.iter().map(|r| r.text.trim().to_string()).collect(),
        sources,
        insufficient_evidence: false,
        insufficiency_reason: None,
        language: env
            .language
            .as_deref()
            .and_then(crate::ingest::language::canonical_language)
            .unwrap_or(language)
            .to_string(),
        localization_failed: false,
    };
    answer.check(evidence)?;
    Ok(answer)
}
