//! End-to-end analysis of one text: segment, embed, label components
//! (with the default-claim rule), classify premise strategies, link
//! premises to claims, and summarize as a portfolio.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::corpus::{segment_sentences, AnnotatedPost, ComponentLabel, SentenceAnnotation, StrategyLabel, SupportEdge};
use crate::diagnostics::{check_sentences, Diagnostic, Span};
use crate::features::{EmbeddingProvider, FeatureError};
use crate::pipeline::{
    build_argument_tree, classify_premises, detect_relations, embed_sentences, extract_components, ArgumentTree,
    ModelBundle, PipelineError,
};
use crate::portfolio::{build_portfolio, Category, Point2, Portfolio, PortfolioError, RatioVector};

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("text is empty")]
    EmptyBody,
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Portfolio(#[from] PortfolioError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzedSentence {
    pub index: usize,
    pub span: Span,
    pub text: String,
    pub component: ComponentLabel,
    pub strategies: BTreeSet<StrategyLabel>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortfolioView {
    pub weights: BTreeMap<Category, f64>,
    pub total_sentences: u64,
    pub ratios: RatioVector,
}

impl From<&Portfolio> for PortfolioView {
    fn from(p: &Portfolio) -> Self {
        Self {
            weights: p.weights(),
            total_sentences: p.total_sentences(),
            ratios: p.ratios(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisFlags {
    /// Sentence 0 was made the claim because none was detected.
    pub default_claim_applied: bool,
    /// Premises attached to a claim only to avoid leaving them unlinked.
    pub fallback_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResult {
    pub sentences: Vec<AnalyzedSentence>,
    pub tree: ArgumentTree,
    pub portfolio: PortfolioView,
    pub diagnostics: Vec<Diagnostic>,
    pub flags: AnalysisFlags,
    /// Position among a topic's examples, filled in by the service.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<Point2>,
}

impl AnalysisResult {
    pub fn annotations(&self) -> Vec<SentenceAnnotation> {
        self.sentences
            .iter()
            .map(|s| SentenceAnnotation {
                sentence_index: s.index,
                component: s.component,
                strategies: s.strategies.clone(),
            })
            .collect()
    }

    /// The analysis as a corpus post, e.g. for logging or re-training.
    pub fn to_annotated_post(&self, post_id: &str, topic: &str, body: &str) -> AnnotatedPost {
        AnnotatedPost {
            post_id: post_id.to_string(),
            topic: topic.to_string(),
            body: body.to_string(),
            delta: 0,
            sentences: segment_sentences(body),
            annotations: self.annotations(),
            edges: self
                .tree
                .edges
                .iter()
                .map(|e| SupportEdge::support(e.premise_index, e.claim_index))
                .collect(),
            extra: Default::default(),
        }
    }
}

/// A model bundle plus the provider it was trained with.
pub struct Analyzer {
    provider: Arc<dyn EmbeddingProvider>,
    bundle: ModelBundle,
    snapshot: String,
}

impl Analyzer {
    pub fn new(bundle: ModelBundle) -> Result<Self, AnalysisError> {
        let provider = bundle.provider.build()?;
        Ok(Self::with_provider(bundle, provider))
    }

    pub fn with_provider(bundle: ModelBundle, provider: Arc<dyn EmbeddingProvider>) -> Self {
        let snapshot = bundle.snapshot_id();
        Self {
            provider,
            bundle,
            snapshot,
        }
    }

    pub fn bundle(&self) -> &ModelBundle {
        &self.bundle
    }

    pub fn snapshot_id(&self) -> &str {
        &self.snapshot
    }

    pub fn analyze(&self, body: &str) -> Result<AnalysisResult, AnalysisError> {
        let sentences = segment_sentences(body);
        if sentences.is_empty() {
            return Err(AnalysisError::EmptyBody);
        }
        let embedded = embed_sentences(&sentences, self.provider.as_ref())?;
        let components = extract_components(&embedded, &self.bundle.components)?;

        let of = |label: ComponentLabel| -> Vec<_> {
            embedded
                .iter()
                .zip(&components.labels)
                .filter(|(_, (_, c))| *c == label)
                .map(|(e, _)| e)
                .collect()
        };
        let claims = of(ComponentLabel::Claim);
        let premises = of(ComponentLabel::Premise);

        let sets = classify_premises(&premises, &self.bundle.strategies)?;
        let strategies: Vec<(usize, BTreeSet<StrategyLabel>)> =
            premises.iter().map(|p| p.index).zip(sets).collect();
        let edges = detect_relations(&claims, &premises, &self.bundle.relations)?;
        let tree = build_argument_tree(&components.labels, &strategies, &edges)?;

        let analyzed: Vec<AnalyzedSentence> = sentences
            .iter()
            .zip(&tree.nodes)
            .map(|(s, n)| AnalyzedSentence {
                index: s.index,
                span: Span { start: s.start, end: s.end },
                text: s.text.clone(),
                component: n.component,
                strategies: n.strategies.clone(),
            })
            .collect();
        let annotations: Vec<SentenceAnnotation> = tree
            .nodes
            .iter()
            .map(|n| SentenceAnnotation {
                sentence_index: n.index,
                component: n.component,
                strategies: n.strategies.clone(),
            })
            .collect();
        let portfolio = build_portfolio(&annotations)?;

        Ok(AnalysisResult {
            sentences: analyzed,
            flags: AnalysisFlags {
                default_claim_applied: components.default_claim_applied,
                fallback_edges: tree.edges.iter().filter(|e| e.fallback).count(),
            },
            diagnostics: check_sentences(&sentences),
            portfolio: PortfolioView::from(&portfolio),
            tree,
            projection: None,
        })
    }
}
