//! Sentence-level text helpers shared by evidence packing and extraction.

/// Byte offsets just past each sentence end (`.`, `!`, `?`, `…` followed by
/// whitespace or end of text), in order.
pub fn sentence_ends(text: &str) -> Vec<usize> {
    let mut ends = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some((i, c)) = it.next() {
        if matches!(c, '.' | '!' | '?' | '…') {
            let end = i + c.len_utf8();
            match it.peek() {
                None => ends.push(end),
                Some((_, n)) if n.is_whitespace() => ends.push(end),
                _ => {}
            }
        }
    }
    ends
}

/// Sentences of `text`, trimmed, non-empty. A trailing fragment without
/// terminal punctuation counts as a sentence.
pub fn sentences(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    for end in sentence_ends(text) {
        let s = text[start..end].trim();
        if !s.is_empty() {
            out.push(s);
        }
        start = end;
    }
    let tail = text[start..].trim();
    if !tail.is_empty() {
        out.push(tail);
    }
    out
}

/// Longest prefix of `text` ending on a sentence boundary with at most
/// `max_chars` characters. Empty if even the first sentence is too long.
pub fn truncate_at_sentence(text: &str, max_chars: usize) -> &str {
    let mut best = 0;
    for end in sentence_ends(text) {
        if text[..end].chars().count() <= max_chars {
            best = end;
        } else {
            break;
        }
    }
    text[..best].trim_end()
}

/// First `max_chars` characters.
pub fn truncate_chars(text: &str, max_chars: usize) -> &str {
    match text.char_indices().nth(max_chars) {
        Some((b, _)) => &text[..b],
        None => text,
    }
}

/// Display excerpt: whole text if short enough, else cut at a sentence or
/// word boundary with an ellipsis.
pub fn shorten(text: &str, max_chars: usize) -> String {
    if text.chars().count() <= max_chars {
        return text.to_string();
    }
    let budget = max_chars.saturating_sub(1);
    let s = truncate_at_sentence(text, budget);
    if !s.is_empty() {
        return format!("{s}…");
    }
    let hard = truncate_chars(text, budget);
    let cut = hard.rfind(char::is_whitespace).map(|i| &hard[..i]).unwrap_or(hard);
    format!("{}…", cut.trim_end())
}
