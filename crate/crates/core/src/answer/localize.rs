//! Translation of a finished answer into the requested EU language.
//!
//! Failure never loses the answer: it comes back untranslated with
//! `localization_failed` set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::envelope::extract_json;
use super::provider::{ChatMessage, ChatProvider};
use super::types::StructuredAnswer;
use super::AnswerError;
use crate::ingest::language::canonical_language;
use crate::ingest::StakeholderGroup;

const LOCALIZE_PROMPT: &str = include_str!("../../prompts/localize_v1.md");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Translatable {
    overview: String,
    group_insights: BTreeMap<StakeholderGroup, Vec<String>>,
    recommendations: Vec<String>,
    #[serde(default)]
    excerpts: Vec<String>,
}

impl Translatable {
    fn same_shape(&self, other: &Translatable) -> bool {
        !other.overview.trim().is_empty()
            && self.recommendations.len() == other.recommendations.len()
            && self.excerpts.len() == other.excerpts.len()
            && self.group_insights.len() == other.group_insights.len()
            && self.group_insights.iter().all(|(g, v)| other.group_insights.get(g).is_some_and(|w| w.len() == v.len()))
    }
}

/// Translates overview, insights and recommendations into `target`. Source
/// excerpts stay in their original language unless `translate_excerpts`.
pub async fn localize(
    mut answer: StructuredAnswer,
    target: &str,
    translator: Option<&dyn ChatProvider>,
    translate_excerpts: bool,
) -> Result<StructuredAnswer, AnswerError> {
    let target = canonical_language(target)
        .ok_or_else(|| AnswerError::Precondition(format!("`{target}` is not an official EU language code")))?;
    if answer.language == target {
        return Ok(answer);
    }
    if answer.insufficient_evidence {
        answer.language = target.to_string();
        return Ok(answer);
    }
    let Some(translator) = translator else {
        answer.localization_failed = true;
        return Ok(answer);
    };

    let request = Translatable {
        overview: answer.overview.clone(),
        group_insights: answer.group_insights.clone(),
        recommendations: answer.recommendations.clone(),
        excerpts: if translate_excerpts {
            answer.sources.iter().map(|s| s.excerpt.clone()).collect()
        } else {
            Vec::new()
        },
    };
    let messages = [
        ChatMessage::system(LOCALIZE_PROMPT.replace("{{language}}", target)),
        ChatMessage::user(serde_json::to_string(&request).expect("plain data serializes")),
    ];
    let translated = match translator.complete(&messages).await {
        Ok(raw) => extract_json(&raw).and_then(|j| serde_json::from_str::<Translatable>(j).ok()),
        Err(e) => {
            tracing::warn!(error = %e, "translation provider failed");
            None
        }
    };
    match translated.filter(|t| request.same_shape(t)) {
        Some(t) => {
            answer.overview = t.overview;
            answer.group_insights = t.group_insights;
            answer.recommendations = t.recommendations;
            if translate_excerpts {
                for (s, e) in answer.sources.iter_mut().zip(t.excerpts) {
                    s.excerpt = e;
                    s.language = target.to_string();
                }
            }
            answer.language = target.to_string();
        }
        None => answer.localization_failed = true,
    }
    Ok(answer)
}
