use super::Sentence;

/// Tokens ending in `.` that never terminate a sentence (compared
/// lowercase, leading brackets and quotes stripped).
pub const ABBREVIATIONS: &[&str] = &[
    "e.g.", "i.e.", "dr.", "mr.", "mrs.", "ms.", "prof.", "sr.", "jr.", "st.", "vs.", "cf.",
    "approx.", "u.s.", "u.k.", "no.",
];

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201D}' | '\u{2019}' | '\u{00BB}')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '\u{201C}' | '\u{2018}' | '\u{00AB}')
}

/// Splits a post body into sentences at `.`, `!` and `?`.
///
/// A terminator run (including trailing closing quotes/brackets) ends a
/// sentence when it is followed by whitespace and the next visible
/// character is not lowercase, or when it reaches the end of the body. A
/// period closing a known abbreviation never splits. Whatever remains
/// after the last terminator becomes a final sentence. Spans exclude
/// surrounding whitespace.
pub fn segment_sentences(body: &str) -> Vec<Sentence> {
    let chars: Vec<(usize, char)> = body.char_indices().collect();
    let byte_end = |pos: usize| chars.get(pos).map_or(body.len(), |&(b, _)| b);

    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut i = 0;
    while i < chars.len() {
        let (_, c) = chars[i];
        if start.is_none() {
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            start = Some(i);
        }
        if !is_terminator(c) {
            i += 1;
            continue;
        }

        let mut j = i + 1;
        while j < chars.len() && (is_terminator(chars[j].1) || is_closer(chars[j].1)) {
            j += 1;
        }
        let splits = match chars.get(j) {
            None => true,
            Some(&(_, next)) if !next.is_whitespace() => false,
            Some(_) => {
                let visible = chars[j..].iter().map(|&(_, ch)| ch).find(|ch| !ch.is_whitespace());
                let lowercase_follows = visible.is_some_and(char::is_lowercase);
                !lowercase_follows && !(c == '.' && ends_with_abbreviation(&chars, i))
            }
        };
        if splits {
            let s = start.take().expect("sentence start set");
            push(&mut out, body, byte_end(s), byte_end(j));
        }
        i = j;
    }
    if let Some(s) = start {
        let from = byte_end(s);
        let trimmed_end = from + body[from..].trim_end().len();
        push(&mut out, body, from, trimmed_end);
    }
    out
}

fn push(out: &mut Vec<Sentence>, body: &str, start: usize, end: usize) {
    out.push(Sentence {
        index: out.len(),
        text: body[start..end].to_string(),
        start,
        end,
    });
}

/// Whether the token ending at the period at `period` is a listed
/// abbreviation.
fn ends_with_abbreviation(chars: &[(usize, char)], period: usize) -> bool {
    let mut k = period;
    while k > 0 && !chars[k - 1].1.is_whitespace() {
        k -= 1;
    }
    let token: String = chars[k..=period]
        .iter()
        .map(|&(_, c)| c)
        .skip_while(|&c| is_opener(c))
        .flat_map(char::to_lowercase)
        .collect();
    ABBREVIATIONS.contains(&token.as_str())
}
