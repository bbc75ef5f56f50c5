use std::collections::HashSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{
    AnnotatedPost, ComponentLabel, Corpus, Sentence, SentenceAnnotation, SupportEdge,
};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("line {line}: malformed JSON: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: post {post_id:?}: field `{field}`: {message}")]
    Schema {
        line: usize,
        post_id: String,
        field: String,
        message: String,
    },
    #[error("failed to read corpus: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Serialize, Deserialize)]
struct SpanRecord {
    index: usize,
    start: usize,
    end: usize,
}

#[derive(Serialize, Deserialize)]
struct PostRecord {
    post_id: String,
    topic: String,
    body: String,
    #[serde(default)]
    delta: u64,
    sentences: Vec<SpanRecord>,
    #[serde(default)]
    annotations: Vec<SentenceAnnotation>,
    #[serde(default)]
    edges: Vec<SupportEdge>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

/// Parses a JSON-Lines corpus. Blank lines are skipped; line numbers in
/// errors are 1-based.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<Corpus, CorpusError> {
    let mut posts = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let post = parse_post_line(&line, i + 1)?;
        if !seen.insert(post.post_id.clone()) {
            return Err(CorpusError::Schema {
                line: i + 1,
                post_id: post.post_id,
                field: "post_id".into(),
                message: "duplicate post_id".into(),
            });
        }
        posts.push(post);
    }
    Ok(Corpus { posts })
}

/// Reads a JSON-Lines corpus file.
pub fn read_corpus(path: impl AsRef<std::path::Path>) -> Result<Corpus, CorpusError> {
    let file = std::fs::File::open(path)?;
    parse_corpus(std::io::BufReader::new(file))
}

/// Parses and structurally checks one JSONL line.
pub fn parse_post_line(line: &str, line_no: usize) -> Result<AnnotatedPost, CorpusError> {
    let value: Value = serde_json::from_str(line).map_err(|source| CorpusError::Json {
        line: line_no,
        source,
    })?;
    let post_id = value
        .get("post_id")
        .and_then(Value::as_str)
        .unwrap_or("<unknown>")
        .to_string();
    let schema = |field: String, message: String| CorpusError::Schema {
        line: line_no,
        post_id: post_id.clone(),
        field,
        message,
    };

    let record: PostRecord = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner().to_string())
    })?;

    let body = record.body;
    let mut sentences = Vec::with_capacity(record.sentences.len());
    let mut prev_end = 0;
    for (pos, span) in record.sentences.iter().enumerate() {
        let field = format!("sentences[{pos}]");
        if span.index != pos {
            return Err(schema(
                field,
                format!("index {} out of order (expected {pos})", span.index),
            ));
        }
        if span.start >= span.end || span.end > body.len() {
            return Err(schema(
                field,
                format!(
                    "span [{}, {}) invalid for body of {} bytes",
                    span.start,
                    span.end,
                    body.len()
                ),
            ));
        }
        if !body.is_char_boundary(span.start) || !body.is_char_boundary(span.end) {
            return Err(schema(field, "span splits a UTF-8 character".into()));
        }
        if span.start < prev_end {
            return Err(schema(field, "span overlaps the previous sentence".into()));
        }
        let text = &body[span.start..span.end];
        if text.trim().is_empty() {
            return Err(schema(field, "sentence text is blank".into()));
        }
        prev_end = span.end;
        sentences.push(Sentence {
            index: span.index,
            text: text.to_string(),
            start: span.start,
            end: span.end,
        });
    }

    for (pos, ann) in record.annotations.iter().enumerate() {
        if ann.component != ComponentLabel::Premise && !ann.strategies.is_empty() {
            return Err(schema(
                format!("annotations[{pos}].strategies"),
                format!(
                    "sentence {} is a {}; only premises carry persuasive strategies",
                    ann.sentence_index, ann.component
                ),
            ));
        }
    }

    Ok(AnnotatedPost {
        post_id: record.post_id,
        topic: record.topic,
        body,
        delta: record.delta,
        sentences,
        annotations: record.annotations,
        edges: record.edges,
        extra: record.extra,
    })
}

fn to_record(post: &AnnotatedPost) -> PostRecord {
    PostRecord {
        post_id: post.post_id.clone(),
        topic: post.topic.clone(),
        body: post.body.clone(),
        delta: post.delta,
        sentences: post
            .sentences
            .iter()
            .map(|s| SpanRecord {
                index: s.index,
                start: s.start,
                end: s.end,
            })
            .collect(),
        annotations: post.annotations.clone(),
        edges: post.edges.clone(),
        extra: post.extra.clone(),
    }
}

/// Serializes a post as one canonical JSON line (object keys sorted, no
/// trailing newline).
pub fn serialize_post(post: &AnnotatedPost) -> String {
    let value = serde_json::to_value(to_record(post)).expect("post record is always valid JSON");
    value.to_string()
}

pub fn write_corpus<W: Write>(corpus: &Corpus, mut out: W) -> std::io::Result<()> {
    for post in &corpus.posts {
        out.write_all(serialize_post(post).as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const VALID: &str = r#"{"post_id":"p1","topic":"abortion","body":"I agree. It helps.","delta":3,"sentences":[{"index":0,"start":0,"end":8},{"index":1,"start":9,"end":18}],"annotations":[{"sentence_index":0,"component":"claim","strategies":[]},{"sentence_index":1,"component":"premise","strategies":["logos","evidence"]}],"edges":[{"premise_index":1,"claim_index":0,"label":1}]}"#;

    fn canonical(line: &str) -> String {
        serde_json::from_str::<Value>(line).unwrap().to_string()
    }

    #[test]
    fn empty_stream_is_empty_corpus() {
        let c = parse_corpus("".as_bytes()).unwrap();
        assert_eq!(c.posts.len(), 0);
    }

    #[test]
    fn one_line_round_trips_canonically() {
        let c = parse_corpus(VALID.as_bytes()).unwrap();
        assert_eq!(c.posts.len(), 1);
        assert_eq!(c.posts[0].sentences[1].text, "It helps.");
        assert_eq!(serialize_post(&c.posts[0]), canonical(VALID));
    }

    #[test]
    fn unknown_fields_are_preserved() {
        let line = VALID.replacen('{', r#"{"source":"cmv","score":{"up":4},"#, 1);
        let c = parse_corpus(line.as_bytes()).unwrap();
        assert_eq!(c.posts[0].extra["source"], "cmv");
        assert_eq!(serialize_post(&c.posts[0]), canonical(&line));
    }

    #[test]
    fn missing_delta_defaults_to_zero() {
        let line = VALID.replace(r#""delta":3,"#, "");
        let c = parse_corpus(line.as_bytes()).unwrap();
        assert_eq!(c.posts[0].delta, 0);
    }

    #[test]
    fn malformed_json_reports_line_number() {
        let input = format!("{VALID}\n{{not json\n");
        match parse_corpus(input.as_bytes()) {
            Err(CorpusError::Json { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected JSON error, got {other:?}"),
        }
    }

    #[test]
    fn strategies_on_claim_is_schema_error() {
        let line = VALID.replace(
            r#""component":"claim","strategies":[]"#,
            r#""component":"claim","strategies":["pathos"]"#,
        );
        match parse_corpus(line.as_bytes()) {
            Err(CorpusError::Schema {
                post_id,
                field,
                message,
                ..
            }) => {
                assert_eq!(post_id, "p1");
                assert_eq!(field, "annotations[0].strategies");
                assert!(message.contains("only premises carry persuasive strategies"));
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn bad_field_type_names_field() {
        let line = VALID.replace(r#""delta":3"#, r#""delta":-3"#);
        match parse_corpus(line.as_bytes()) {
            Err(CorpusError::Schema { field, post_id, .. }) => {
                assert_eq!(field, "delta");
                assert_eq!(post_id, "p1");
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_component_is_schema_error() {
        let line = VALID.replace(r#""component":"claim""#, r#""component":"rebuttal""#);
        assert!(matches!(
            parse_corpus(line.as_bytes()),
            Err(CorpusError::Schema { .. })
        ));
    }

    #[test]
    fn span_out_of_bounds_rejected() {
        let line = VALID.replace(r#""start":9,"end":18"#, r#""start":9,"end":99"#);
        match parse_corpus(line.as_bytes()) {
            Err(CorpusError::Schema { field, .. }) => assert_eq!(field, "sentences[1]"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_post_id_rejected() {
        let input = format!("{VALID}\n{VALID}\n");
        match parse_corpus(input.as_bytes()) {
            Err(CorpusError::Schema { line, field, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(field, "post_id");
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }
}
