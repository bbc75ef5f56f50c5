//! Immutable state shared by the read endpoints: the corpus, the loaded
//! models, and per-topic example views with their MDS layout.

use std::collections::{BTreeMap, BTreeSet};

use rhetor_core::corpus::{AnnotatedPost, ComponentLabel, Corpus, StrategyLabel, SupportEdge};
use rhetor_core::diagnostics::Span;
use rhetor_core::portfolio::{average_ratios, build_portfolio, mds_project, rank_examples_by_delta, Mds, Point2};
use rhetor_core::analysis::PortfolioView;
use rhetor_core::{Analyzer, RatioVector};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct TopicEntry {
    pub topic: String,
    pub example_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleSentence {
    pub index: usize,
    pub span: Span,
    pub text: String,
    pub component: ComponentLabel,
    pub strategies: BTreeSet<StrategyLabel>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Example {
    pub post_id: String,
    pub delta: u64,
    pub body: String,
    pub sentences: Vec<ExampleSentence>,
    pub edges: Vec<SupportEdge>,
    pub portfolio: PortfolioView,
    pub coordinates: Point2,
}

#[derive(Clone, Debug, Serialize)]
pub struct TopicExamples {
    pub topic: String,
    /// Highest Δ first.
    pub examples: Vec<Example>,
    pub average: RatioVector,
    #[serde(skip)]
    pub mds: Mds,
}

impl TopicExamples {
    pub fn example(&self, post_id: &str) -> Option<&Example> {
        self.examples.iter().find(|e| e.post_id == post_id)
    }

    /// Out-of-sample position of a new ratio vector in this topic's layout.
    pub fn project(&self, ratios: &RatioVector) -> Point2 {
        let d: Vec<f64> = self.examples.iter().map(|e| e.portfolio.ratios.distance(ratios)).collect();
        self.mds.place(&d)
    }
}

pub struct Snapshot {
    pub analyzer: Analyzer,
    pub topics: Vec<TopicEntry>,
    pub examples: BTreeMap<String, TopicExamples>,
    /// Posts left out of the example views because they have no
    /// argumentative sentence or inconsistent labels.
    pub skipped: Vec<String>,
}

fn example_of(post: &AnnotatedPost) -> Option<Example> {
    let portfolio = build_portfolio(&post.annotations).ok()?;
    let sentences = post
        .sentences
        .iter()
        .map(|s| {
            let a = post.annotation(s.index)?;
            Some(ExampleSentence {
                index: s.index,
                span: Span { start: s.start, end: s.end },
                text: s.text.clone(),
                component: a.component,
                strategies: a.strategies.clone(),
            })
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Example {
        post_id: post.post_id.clone(),
        delta: post.delta,
        body: post.body.clone(),
        sentences,
        edges: post.edges.clone(),
        portfolio: PortfolioView::from(&portfolio),
        coordinates: Point2 { x: 0.0, y: 0.0 },
    })
}

impl Snapshot {
    pub fn new(corpus: &Corpus, analyzer: Analyzer) -> Self {
        let mut topics = Vec::new();
        let mut examples = BTreeMap::new();
        let mut skipped = Vec::new();
        for topic in corpus.topics() {
            let posts: Vec<&AnnotatedPost> = corpus.posts.iter().filter(|p| p.topic == topic).collect();
            topics.push(TopicEntry {
                topic: topic.clone(),
                example_count: posts.len(),
            });
            let by_id: BTreeMap<&str, &AnnotatedPost> = posts.iter().map(|p| (p.post_id.as_str(), *p)).collect();
            let mut list = Vec::new();
            for id in rank_examples_by_delta(posts.iter().copied()) {
                match example_of(by_id[id.as_str()]) {
                    Some(e) => list.push(e),
                    None => skipped.push(id),
                }
            }
            if list.is_empty() {
                continue;
            }
            let ratios: Vec<RatioVector> = list.iter().map(|e| e.portfolio.ratios).collect();
            let (projection, mds) = mds_project(&ratios);
            for (e, p) in list.iter_mut().zip(projection.points) {
                e.coordinates = p;
            }
            let average = average_ratios(&ratios).expect("topic has at least one example");
            examples.insert(
                topic.clone(),
                TopicExamples {
                    topic,
                    examples: list,
                    average,
                    mds,
                },
            );
        }
        Self {
            analyzer,
            topics,
            examples,
            skipped,
        }
    }
}
