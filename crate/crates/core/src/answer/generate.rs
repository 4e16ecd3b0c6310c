use std::fmt::Write as _;

use super::envelope::parse_envelope;
use super::provider::{ChatMessage, ChatProvider, ProviderError};
use super::types::{EvidenceBundle, QueryRequest, StructuredAnswer};
use super::AnswerError;

pub const ANSWER_PROMPT_VERSION: &str = "answer_v1";
const ANSWER_PROMPT: &str = include_str!("../../prompts/answer_v1.md");

pub fn system_prompt(language: &str) -> String {
    ANSWER_PROMPT.replace("{{language}}", language)
}

/// The user turn: question, requested scope and the evidence list.
pub fn render_user_message(q: &QueryRequest, ev: &EvidenceBundle) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Question: {}", q.question.trim());
    if let Some(whom) = q.whom.as_ref().filter(|w| !w.is_empty()) {
        let names: Vec<_> = whom.iter().map(|g| g.as_str()).collect();
        let _ = writeln!(s, "Restricted to stakeholder groups: {}", names.join(", "));
    }
    if let Some(about) = q.about.as_ref().filter(|a| !a.is_empty()) {
        let names: Vec<_> = about.iter().map(String::as_str).collect();
        let _ = writeln!(s, "Restricted to topics: {}", names.join(", "));
    }
    let _ = writeln!(s, "\nFeedback items:");
    for item in &ev.items {
        let _ = writeln!(
            s,
            "[id={}] group={} country={} language={} topic={}\n{}\n",
            item.record_id,
            item.meta.stakeholder_group,
            item.meta.country,
            item.meta.language,
            item.meta.topic,
            item.text
        );
    }
    s
}

fn reprompt(violations: &[String]) -> String {
    let mut s = String::from("Your reply violated the required JSON envelope. Problems:\n");
    for v in violations {
        let _ = writeln!(s, "- {v}");
    }
    s.push_str("Reply again with one corrected JSON object only.");
    s
}

fn transport(e: ProviderError) -> AnswerError {
    AnswerError::Provider(e)
}

/// Asks `provider` for an envelope and validates it. A contract violation
/// earns exactly one re-prompt; a second violation is an error.
pub async fn generate_answer(
    q: &QueryRequest,
    ev: &EvidenceBundle,
    language: &str,
    provider: &dyn ChatProvider,
) -> Result<StructuredAnswer, AnswerError> {
    if ev.is_empty() {
        return Err(AnswerError::Precondition("generation needs non-empty evidence".into()));
    }
    let mut messages =
        vec![ChatMessage::system(system_prompt(language)), ChatMessage::user(render_user_message(q, ev))];

    let first = provider.complete(&messages).await.map_err(transport)?;
    let first_violations = match parse_envelope(&first, ev, language) {
        Ok(answer) => return Ok(answer),
        Err(v) => v,
    };
    tracing::warn!(violations = ?first_violations, "envelope rejected, re-prompting once");
    messages.push(ChatMessage::assistant(first));
    messages.push(ChatMessage::user(reprompt(&first_violations)));

    let second = provider.complete(&messages).await.map_err(transport)?;
    parse_envelope(&second, ev, language).map_err(|second_violations| AnswerError::GenerationContract {
        first: first_violations,
        second: second_violations,
    })
}
