use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ComponentLabel, Corpus, RelationLabel, StrategyLabel};

/// Raw label occurrence counts for one topic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicStats {
    pub posts: usize,
    pub sentences: usize,
    pub claims: usize,
    pub premises: usize,
    pub non_arguments: usize,
    pub logos: usize,
    pub pathos: usize,
    pub ethos: usize,
    pub evidence: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelStats {
    pub posts: usize,
    pub sentences: usize,
    pub claims: usize,
    pub premises: usize,
    pub non_arguments: usize,
    pub logos: usize,
    pub pathos: usize,
    pub ethos: usize,
    pub evidence: usize,
    pub support_edges: usize,
    pub topics: BTreeMap<String, TopicStats>,
}

impl TopicStats {
    fn count(&mut self, component: ComponentLabel, strategies: impl Iterator<Item = StrategyLabel>) {
        match component {
            ComponentLabel::Claim => self.claims += 1,
            ComponentLabel::Premise => self.premises += 1,
            ComponentLabel::NonArgument => self.non_arguments += 1,
        }
        for s in strategies {
            match s {
                StrategyLabel::Logos => self.logos += 1,
                StrategyLabel::Pathos => self.pathos += 1,
                StrategyLabel::Ethos => self.ethos += 1,
                StrategyLabel::Evidence => self.evidence += 1,
            }
        }
    }
}

/// Counts raw label occurrences: a premise labeled `{logos, evidence}` adds
/// one to each.
pub fn corpus_stats(corpus: &Corpus) -> LabelStats {
    let mut total = TopicStats::default();
    let mut topics: BTreeMap<String, TopicStats> = BTreeMap::new();
    let mut support_edges = 0;
    for post in &corpus.posts {
        let topic = topics.entry(post.topic.clone()).or_default();
        topic.posts += 1;
        topic.sentences += post.sentences.len();
        total.posts += 1;
        total.sentences += post.sentences.len();
        for a in &post.annotations {
            topic.count(a.component, a.strategies.iter().copied());
            total.count(a.component, a.strategies.iter().copied());
        }
        support_edges += post
            .edges
            .iter()
            .filter(|e| e.label == RelationLabel::Support)
            .count();
    }
    LabelStats {
        posts: total.posts,
        sentences: total.sentences,
        claims: total.claims,
        premises: total.premises,
        non_arguments: total.non_arguments,
        logos: total.logos,
        pathos: total.pathos,
        ethos: total.ethos,
        evidence: total.evidence,
        support_edges,
        topics,
    }
}
