//! Minimal writing checks shown under the editor: doubled words, missing
//! terminal punctuation and overlong sentences.

use serde::{Deserialize, Serialize};

use crate::corpus::Sentence;

/// Sentences with more words than this are flagged.
pub const MAX_SENTENCE_WORDS: usize = 60;

/// Byte range `[start, end)` into the analyzed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    DoubledWord,
    MissingTerminalPunctuation,
    LongSentence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub span: Span,
    pub kind: DiagnosticKind,
    pub message: String,
}

/// Words of `text` as (byte offset, word).
fn words(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        let inside = c.is_alphanumeric() || c == '\'' || c == '\u{2019}';
        match (inside, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

/// Diagnostics ordered by position.
pub fn check_sentences(sentences: &[Sentence]) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for s in sentences {
        let ws = words(&s.text);
        for pair in ws.windows(2) {
            let ((_, a), (b_at, b)) = (pair[0], pair[1]);
            if a.chars().any(char::is_alphabetic) && a.to_lowercase() == b.to_lowercase() {
                out.push(Diagnostic {
                    span: Span {
                        start: s.start + pair[0].0,
                        end: s.start + b_at + b.len(),
                    },
                    kind: DiagnosticKind::DoubledWord,
                    message: format!("repeated word \"{b}\""),
                });
            }
        }
        let last = s
            .text
            .trim_end()
            .trim_end_matches(|c| matches!(c, '"' | '\'' | ')' | ']' | '\u{201D}' | '\u{2019}'))
            .chars()
            .last();
        if !matches!(last, Some('.' | '!' | '?')) {
            out.push(Diagnostic {
                span: Span { start: s.start, end: s.end },
                kind: DiagnosticKind::MissingTerminalPunctuation,
                message: "sentence does not end with . ! or ?".into(),
            });
        }
        if ws.len() > MAX_SENTENCE_WORDS {
            out.push(Diagnostic {
                span: Span { start: s.start, end: s.end },
                kind: DiagnosticKind::LongSentence,
                message: format!("sentence has {} words (limit {MAX_SENTENCE_WORDS})", ws.len()),
            });
        }
    }
    out.sort_by_key(|d| (d.span.start, d.span.end));
    out
}
