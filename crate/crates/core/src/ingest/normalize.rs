//! Cleaning of raw submissions into [`FeedbackRecord`]s.
//!
//! Markup is stripped, entities decoded, text is NFC-normalized, control
//! characters dropped and whitespace collapsed. Nothing else touches the
//! wording.

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use unicode_normalization::UnicodeNormalization;

use super::language::resolve_language;
use super::record::{derive_record_id, FeedbackRecord, InitiativeMeta, RawSubmission, RejectReason, StakeholderGroup};

pub const MIN_TEXT_CHARS: usize = 3;

pub const UNKNOWN_COUNTRY: &str = "unknown";

/// Normalizes one submission. Rejection is an ordinary return value.
pub fn normalize(raw: &RawSubmission, meta: &InitiativeMeta) -> Result<FeedbackRecord, RejectReason> {
    let text = clean_text(&raw.payload);
    let len = text.chars().count();
    if len == 0 {
        return Err(RejectReason::EmptyText);
    }
    if len < MIN_TEXT_CHARS {
        return Err(RejectReason::TooShort);
    }

    let declared = |key: &str| raw.declared_metadata.get(key).map(|v| v.trim()).filter(|v| !v.is_empty());

    let submitted_at = declared("date").and_then(parse_timestamp).ok_or(RejectReason::BadTimestamp)?;

    let stakeholder_group =
        declared("user_type").map(StakeholderGroup::from_declared).unwrap_or(StakeholderGroup::Other);

    let organization_name = declared("organization").map(collapse_whitespace);
    let country = declared("country").and_then(canonical_country).unwrap_or_else(|| UNKNOWN_COUNTRY.to_string());
    let language = resolve_language(declared("language"), &text).to_string();

    let initiative_id = raw.initiative_id.trim().to_string();
    Ok(FeedbackRecord {
        record_id: derive_record_id(&initiative_id, &raw.source_id, &text),
        initiative_id,
        initiative_title: meta.title.clone(),
        topic: meta.topic.clone(),
        stakeholder_group,
        organization_name,
        country,
        language,
        submitted_at,
        text,
    })
}

/// Markup stripping, entity decoding, NFC, control-char removal and
/// whitespace collapsing, in that order.
pub fn clean_text(payload: &str) -> String {
    let stripped = strip_markup(payload);
    let decoded = html_escape::decode_html_entities(&stripped);
    let nfc: String = decoded.nfc().collect();
    let no_controls: String = nfc
        .chars()
        .map(|c| if c.is_whitespace() { ' ' } else { c })
        .filter(|c| !c.is_control() && !is_format_char(*c))
        .collect();
    collapse_whitespace(&no_controls)
}

// Zero-width and bidi formatting characters that survive `is_control`.
fn is_format_char(c: char) -> bool {
    matches!(c, '\u{200B}'..='\u{200F}' | '\u{202A}'..='\u{202E}' | '\u{2060}'..='\u{2064}' | '\u{FEFF}')
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

const INLINE_TAGS: [&str; 15] =
    ["a", "abbr", "b", "code", "em", "font", "i", "mark", "s", "small", "span", "strong", "sub", "sup", "u"];

/// Removes tags. Block tags become a space so adjacent paragraphs do not
/// fuse; inline tags vanish. `<script>` and `<style>` bodies are dropped entirely. A `<`
/// that never closes is kept as text.
fn strip_markup(input: &str) -> String {
    let mut out = String::with_capacity(input.len());
    let mut rest = input;
    while let Some(open) = rest.find('<') {
        out.push_str(&rest[..open]);
        let after = &rest[open..];
        let Some(close) = after.find('>') else {
            out.push_str(after);
            return out;
        };
        let tag = after[1..close].trim_start_matches('/').to_ascii_lowercase();
        let name: String = tag.chars().take_while(|c| c.is_ascii_alphanumeric()).collect();
        if name.is_empty() && !after[1..].starts_with('!') && !after[1..].starts_with('/') {
            // Not a tag ("a < b > c"): keep the bracket literally.
            out.push('<');
            rest = &after[1..];
            continue;
        }
        if !INLINE_TAGS.contains(&name.as_str()) {
            out.push(' ');
        }
        rest = &after[close + 1..];
        if (name == "script" || name == "style") && !after[1..].starts_with('/') {
            let end_tag = format!("</{name}");
            match rest.to_ascii_lowercase().find(&end_tag) {
                Some(end) => {
                    let tail = &rest[end..];
                    rest = tail.find('>').map(|i| &tail[i + 1..]).unwrap_or("");
                }
                None => rest = "",
            }
        }
    }
    out.push_str(rest);
    out
}

/// Accepts RFC 3339, `YYYY-MM-DD HH:MM:SS`, `YYYY/MM/DD HH:MM:SS` (portal
/// style) and bare dates. Naive values are taken as UTC.
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%d %H:%M:%S", "%Y/%m/%d %H:%M:%S", "%Y-%m-%dT%H:%M:%S"] {
        if let Ok(ndt) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(ndt.and_utc());
        }
    }
    for fmt in ["%Y-%m-%d", "%Y/%m/%d"] {
        if let Ok(d) = NaiveDate::parse_from_str(s, fmt) {
            return d.and_hms_opt(0, 0, 0).map(|ndt| ndt.and_utc());
        }
    }
    None
}

// alpha-3 → alpha-2 for EU/EEA members and the non-EU origins the portal
// sees most often.
const ALPHA3: &[(&str, &str)] = &[
    ("AUT", "AT"),
    ("BEL", "BE"),
    ("BGR", "BG"),
    ("HRV", "HR"),
    ("CYP", "CY"),
    ("CZE", "CZ"),
    ("DNK", "DK"),
    ("EST", "EE"),
    ("FIN", "FI"),
    ("FRA", "FR"),
    ("DEU", "DE"),
    ("GRC", "GR"),
    ("HUN", "HU"),
    ("IRL", "IE"),
    ("ITA", "IT"),
    ("LVA", "LV"),
    ("LTU", "LT"),
    ("LUX", "LU"),
    ("MLT", "MT"),
    ("NLD", "NL"),
    ("POL", "PL"),
    ("PRT", "PT"),
    ("ROU", "RO"),
    ("SVK", "SK"),
    ("SVN", "SI"),
    ("ESP", "ES"),
    ("SWE", "SE"),
    ("NOR", "NO"),
    ("ISL", "IS"),
    ("LIE", "LI"),
    ("CHE", "CH"),
    ("GBR", "GB"),
    ("USA", "US"),
    ("UKR", "UA"),
    ("TUR", "TR"),
    ("SRB", "RS"),
    ("CAN", "CA"),
    ("JPN", "JP"),
    ("CHN", "CN"),
    ("AUS", "AU"),
    ("BRA", "BR"),
    ("IND", "IN"),
];

/// ISO 3166-1 alpha-2 (any case) or a known alpha-3 code → upper-case alpha-2.
pub fn canonical_country(s: &str) -> Option<String> {
    let up = s.trim().to_ascii_uppercase();
    match up.len() {
        2 if up.chars().all(|c| c.is_ascii_alphabetic()) => Some(up),
        3 => ALPHA3.iter().find(|(a3, _)| *a3 == up).map(|(_, a2)| a2.to_string()),
        _ => None,
    }
}
