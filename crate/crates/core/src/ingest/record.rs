use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A submission as pulled from a source, before any cleaning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSubmission {
    pub source_id: String,
    pub initiative_id: String,
    pub payload: String,
    /// Keys used by the normalizer: `user_type`, `organization`, `country`,
    /// `language`, `date`. Anything else is carried but ignored.
    #[serde(default)]
    pub declared_metadata: BTreeMap<String, String>,
}

/// Initiative-level facts attached to every record of that initiative.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InitiativeMeta {
    pub initiative_id: String,
    pub title: String,
    pub topic: String,
}

/// Who wrote a piece of feedback (the "Whom" filter axis).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StakeholderGroup {
    Citizen,
    Company,
    Ngo,
    AcademicResearch,
    PublicAuthority,
    TradeUnion,
    Other,
    Anonymous,
}

impl StakeholderGroup {
    pub const ALL: [StakeholderGroup; 8] = [
        StakeholderGroup::Citizen,
        StakeholderGroup::Company,
        StakeholderGroup::Ngo,
        StakeholderGroup::AcademicResearch,
        StakeholderGroup::PublicAuthority,
        StakeholderGroup::TradeUnion,
        StakeholderGroup::Other,
        StakeholderGroup::Anonymous,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StakeholderGroup::Citizen => "citizen",
            StakeholderGroup::Company => "company",
            StakeholderGroup::Ngo => "ngo",
            StakeholderGroup::AcademicResearch => "academic_research",
            StakeholderGroup::PublicAuthority => "public_authority",
            StakeholderGroup::TradeUnion => "trade_union",
            StakeholderGroup::Other => "other",
            StakeholderGroup::Anonymous => "anonymous",
        }
    }

    /// Maps a declared user type (portal enum or human label) onto a group.
    /// Anything unrecognised lands in [`StakeholderGroup::Other`].
    pub fn from_declared(user_type: &str) -> Self {
        let key: String =
            user_type.trim().to_lowercase().chars().map(|c| if c == '_' || c == '-' { ' ' } else { c }).collect();
        let key = key.split_whitespace().collect::<Vec<_>>().join(" ");
        match key.as_str() {
            "citizen" | "eu citizen" | "non eu citizen" | "citizens" => StakeholderGroup::Citizen,
            "company"
            | "company business organisation"
            | "company/business organisation"
            | "business"
            | "business association"
            | "business organisation"
            | "company/business" => StakeholderGroup::Company,
            "ngo"
            | "non governmental organisation"
            | "non governmental organisation (ngo)"
            | "ngo (non governmental organisation)"
            | "environmental organisation"
            | "consumer organisation" => StakeholderGroup::Ngo,
            "academic research institution"
            | "academic/research institution"
            | "academic research instittution"
            | "academic research"
            | "university"
            | "research institution" => StakeholderGroup::AcademicResearch,
            "public authority" | "public authorities" => StakeholderGroup::PublicAuthority,
            "trade union" | "trade unions" => StakeholderGroup::TradeUnion,
            "anonymous" => StakeholderGroup::Anonymous,
            "ngo or association" | "association" => StakeholderGroup::Ngo,
            _ => StakeholderGroup::Other,
        }
    }
}

impl fmt::Display for StakeholderGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown stakeholder group `{0}`")]
pub struct UnknownGroup(pub String);

impl FromStr for StakeholderGroup {
    type Err = UnknownGroup;

    /// Strict parse of the canonical snake_case names.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StakeholderGroup::ALL.into_iter().find(|g| g.as_str() == s).ok_or_else(|| UnknownGroup(s.to_string()))
    }
}

/// One normalized feedback submission.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackRecord {
    pub record_id: String,
    pub initiative_id: String,
    pub initiative_title: String,
    pub topic: String,
    pub stakeholder_group: StakeholderGroup,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub organization_name: Option<String>,
    pub country: String,
    pub language: String,
    pub submitted_at: DateTime<Utc>,
    pub text: String,
}

/// Content-derived identifier: first 16 bytes of
/// SHA-256(initiative_id \0 source_id \0 text), hex encoded.
pub fn derive_record_id(initiative_id: &str, source_id: &str, text: &str) -> String {
    let mut h = Sha256::new();
    h.update(initiative_id.as_bytes());
    h.update([0u8]);
    h.update(source_id.as_bytes());
    h.update([0u8]);
    h.update(text.as_bytes());
    hex::encode(&h.finalize()[..16])
}

/// Why a submission did not become a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    /// The dump line was not a valid record object.
    Parse,
    EmptyText,
    TooShort,
    BadTimestamp,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::Parse => "parse",
            RejectReason::EmptyText => "empty_text",
            RejectReason::TooShort => "too_short",
            RejectReason::BadTimestamp => "bad_timestamp",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub fetched: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub rejected_by_reason: BTreeMap<RejectReason, usize>,
    pub duplicates_dropped: usize,
}

impl IngestReport {
    pub fn reject(&mut self, reason: RejectReason) {
        self.rejected += 1;
        *self.rejected_by_reason.entry(reason).or_default() += 1;
    }

    /// `fetched == accepted + rejected + duplicates_dropped`, and the
    /// histogram sums to `rejected`.
    pub fn is_consistent(&self) -> bool {
        self.fetched == self.accepted + self.rejected + self.duplicates_dropped
            && self.rejected_by_reason.values().sum::<usize>() == self.rejected
    }
}
