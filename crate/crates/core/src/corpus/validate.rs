use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::{ComponentLabel, Corpus, StrategyLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    MissingAnnotation,
    DuplicateAnnotation,
    AnnotationOutOfRange,
    StrategiesOnNonPremise,
    PremiseWithoutStrategy,
    EdgeOutOfRange,
    PremiseIndexNotPremise,
    ClaimIndexNotClaim,
    DuplicatePostId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub post_id: String,
    pub kind: ViolationKind,
    pub message: String,
}

/// Informational finding that needs a human to confirm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Note {
    pub post_id: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<Note>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every post against the annotation rules. Violations are returned
/// as data; this never fails.
pub fn validate_corpus(corpus: &Corpus) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut ids = HashSet::new();

    for post in &corpus.posts {
        let mut flag = |kind: ViolationKind, message: String| {
            report.violations.push(Violation {
                post_id: post.post_id.clone(),
                kind,
                message,
            })
        };
        if !ids.insert(post.post_id.as_str()) {
            flag(ViolationKind::DuplicatePostId, "duplicate post_id".into());
        }

        let n = post.sentences.len();
        let mut by_sentence: BTreeMap<usize, ComponentLabel> = BTreeMap::new();
        for ann in &post.annotations {
            let i = ann.sentence_index;
            if i >= n {
                flag(
                    ViolationKind::AnnotationOutOfRange,
                    format!("annotation for sentence {i} but post has {n} sentences"),
                );
                continue;
            }
            if by_sentence.insert(i, ann.component).is_some() {
                flag(
                    ViolationKind::DuplicateAnnotation,
                    format!("sentence {i} has more than one component label"),
                );
            }
            match ann.component {
                ComponentLabel::Premise if ann.strategies.is_empty() => flag(
                    ViolationKind::PremiseWithoutStrategy,
                    format!("premise {i} has no persuasive strategy"),
                ),
                ComponentLabel::Claim | ComponentLabel::NonArgument
                    if !ann.strategies.is_empty() =>
                {
                    flag(
                        ViolationKind::StrategiesOnNonPremise,
                        format!("sentence {i} is a {} but carries strategies", ann.component),
                    )
                }
                _ => {}
            }
        }
        for i in (0..n).filter(|i| !by_sentence.contains_key(i)) {
            flag(
                ViolationKind::MissingAnnotation,
                format!("missing annotation for sentence {i}"),
            );
        }

        for e in &post.edges {
            if e.premise_index >= n || e.claim_index >= n {
                flag(
                    ViolationKind::EdgeOutOfRange,
                    format!(
                        "edge {}->{} points outside the post's {n} sentences",
                        e.premise_index, e.claim_index
                    ),
                );
                continue;
            }
            if by_sentence.get(&e.premise_index) != Some(&ComponentLabel::Premise) {
                flag(
                    ViolationKind::PremiseIndexNotPremise,
                    format!("premise_index not a Premise (sentence {})", e.premise_index),
                );
            }
            if by_sentence.get(&e.claim_index) != Some(&ComponentLabel::Claim) {
                flag(
                    ViolationKind::ClaimIndexNotClaim,
                    format!("claim_index not a Claim (sentence {})", e.claim_index),
                );
            }
        }

        let ethos: Vec<usize> = post
            .annotations
            .iter()
            .filter(|a| a.strategies.contains(&StrategyLabel::Ethos))
            .map(|a| a.sentence_index)
            .collect();
        if !ethos.is_empty() {
            report.notes.push(Note {
                post_id: post.post_id.clone(),
                message: format!(
                    "ethos on sentences {ethos:?}: confirm the credibility claimed belongs to the poster"
                ),
            });
        }
    }
    report
}
