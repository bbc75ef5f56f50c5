//! Labeled argument corpus: data model, JSON-Lines format, validation,
//! sentence segmentation and stratified splitting.

mod io;
mod segment;
mod split;
mod stats;
mod validate;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub use io::{parse_corpus, parse_post_line, read_corpus, serialize_post, write_corpus, CorpusError};
pub use segment::{segment_sentences, ABBREVIATIONS};
pub use split::{stratified_split, Split, SplitError};
pub use stats::{corpus_stats, LabelStats, TopicStats};
pub use validate::{validate_corpus, Note, ValidationReport, Violation, ViolationKind};

/// Persuasive strategy carried by a premise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyLabel {
    Logos,
    Pathos,
    Ethos,
    Evidence,
}

impl StrategyLabel {
    pub const ALL: [StrategyLabel; 4] = [
        StrategyLabel::Logos,
        StrategyLabel::Pathos,
        StrategyLabel::Ethos,
        StrategyLabel::Evidence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StrategyLabel::Logos => "logos",
            StrategyLabel::Pathos => "pathos",
            StrategyLabel::Ethos => "ethos",
            StrategyLabel::Evidence => "evidence",
        }
    }
}

impl fmt::Display for StrategyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StrategyLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown strategy `{s}`"))
    }
}

/// Argumentative role of a sentence. Each sentence carries exactly one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentLabel {
    Claim,
    Premise,
    NonArgument,
}

impl ComponentLabel {
    pub const ALL: [ComponentLabel; 3] = [
        ComponentLabel::Claim,
        ComponentLabel::Premise,
        ComponentLabel::NonArgument,
    ];

    /// Class id used by the component-extraction task.
    pub fn class_id(self) -> usize {
        match self {
            ComponentLabel::Claim => 0,
            ComponentLabel::Premise => 1,
            ComponentLabel::NonArgument => 2,
        }
    }

    pub fn from_class_id(id: usize) -> Option<Self> {
        ComponentLabel::ALL.get(id).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ComponentLabel::Claim => "claim",
            ComponentLabel::Premise => "premise",
            ComponentLabel::NonArgument => "non_argument",
        }
    }

    pub fn is_argumentative(self) -> bool {
        !matches!(self, ComponentLabel::NonArgument)
    }
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One sentence of a post body. `start..end` are byte offsets into the body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub index: usize,
    pub text: String,
    pub start: usize,
    pub end: usize,
}

impl Sentence {
    pub fn span(&self) -> Range<usize> {
        self.start..self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceAnnotation {
    pub sentence_index: usize,
    pub component: ComponentLabel,
    #[serde(default)]
    pub strategies: BTreeSet<StrategyLabel>,
}

impl SentenceAnnotation {
    pub fn claim(sentence_index: usize) -> Self {
        Self {
            sentence_index,
            component: ComponentLabel::Claim,
            strategies: BTreeSet::new(),
        }
    }

    pub fn non_argument(sentence_index: usize) -> Self {
        Self {
            sentence_index,
            component: ComponentLabel::NonArgument,
            strategies: BTreeSet::new(),
        }
    }

    pub fn premise(
        sentence_index: usize,
        strategies: impl IntoIterator<Item = StrategyLabel>,
    ) -> Self {
        Self {
            sentence_index,
            component: ComponentLabel::Premise,
            strategies: strategies.into_iter().collect(),
        }
    }
}

/// Relation label of a claim-premise pair, serialized as `1` / `0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum RelationLabel {
    NonSupport,
    Support,
}

impl RelationLabel {
    /// Class id used by the relation-detection task.
    pub fn class_id(self) -> usize {
        match self {
            RelationLabel::NonSupport => 0,
            RelationLabel::Support => 1,
        }
    }
}

impl TryFrom<u8> for RelationLabel {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            0 => Ok(RelationLabel::NonSupport),
            1 => Ok(RelationLabel::Support),
            other => Err(format!("relation label must be 0 or 1, got {other}")),
        }
    }
}

impl From<RelationLabel> for u8 {
    fn from(l: RelationLabel) -> u8 {
        l.class_id() as u8
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportEdge {
    pub premise_index: usize,
    pub claim_index: usize,
    pub label: RelationLabel,
}

impl SupportEdge {
    pub fn support(premise_index: usize, claim_index: usize) -> Self {
        Self {
            premise_index,
            claim_index,
            label: RelationLabel::Support,
        }
    }
}

/// One forum reply with its sentence-level annotation.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnotatedPost {
    pub post_id: String,
    pub topic: String,
    pub body: String,
    pub delta: u64,
    pub sentences: Vec<Sentence>,
    pub annotations: Vec<SentenceAnnotation>,
    pub edges: Vec<SupportEdge>,
    /// Fields the schema does not know about, kept for round-tripping.
    pub extra: Map<String, Value>,
}

impl AnnotatedPost {
    pub fn annotation(&self, sentence_index: usize) -> Option<&SentenceAnnotation> {
        self.annotations
            .iter()
            .find(|a| a.sentence_index == sentence_index)
    }

    pub fn component_of(&self, sentence_index: usize) -> Option<ComponentLabel> {
        self.annotation(sentence_index).map(|a| a.component)
    }

    pub fn indices_with(&self, component: ComponentLabel) -> Vec<usize> {
        let mut idx: Vec<usize> = self
            .annotations
            .iter()
            .filter(|a| a.component == component)
            .map(|a| a.sentence_index)
            .collect();
        idx.sort_unstable();
        idx
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Corpus {
    pub posts: Vec<AnnotatedPost>,
}

impl Corpus {
    pub fn new(posts: Vec<AnnotatedPost>) -> Self {
        Self { posts }
    }

    /// Distinct topics, sorted.
    pub fn topics(&self) -> Vec<String> {
        self.posts
            .iter()
            .map(|p| p.topic.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn post(&self, post_id: &str) -> Option<&AnnotatedPost> {
        self.posts.iter().find(|p| p.post_id == post_id)
    }

    pub fn len(&self) -> usize {
        self.posts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posts.is_empty()
    }
}
