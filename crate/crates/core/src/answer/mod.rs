//! Evidence packing, grounded generation and answer localization.

pub mod envelope;
pub mod evidence;
pub mod extractive;
pub mod generate;
pub mod localize;
pub mod provider;
pub mod text;
pub mod types;

pub use evidence::{build_evidence, check_sufficiency, Sufficiency, SufficiencyPolicy, DEFAULT_BUDGET_CHARS};
pub use extractive::extractive_answer;
pub use generate::generate_answer;
pub use localize::localize;
pub use provider::{ChatMessage, ChatProvider, ProviderError, RemoteChatConfig, RemoteChatProvider, Role};
pub use types::{
    EvidenceBundle, EvidenceItem, InsufficiencyReason, QueryRequest, SourceRef, StructuredAnswer, DEFAULT_K,
    MAX_QUESTION_CHARS,
};

#[derive(Debug, thiserror::Error)]
pub enum AnswerError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Provider(#[from] ProviderError),
    /// The provider broke the envelope contract twice in a row.
    #[error("generation contract violated after re-prompt: {second:?}")]
    GenerationContract { first: Vec<String>, second: Vec<String> },
}

impl AnswerError {
    pub fn is_retriable(&self) -> bool {
        matches!(self, AnswerError::Provider(ProviderError { retriable: true, .. }))
    }
}
