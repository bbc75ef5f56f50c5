//! Argument-structure and persuasive-strategy analysis.
//!
//! The crate covers the whole offline engine: the annotated corpus format,
//! sentence featurization, from-scratch classifiers with cross-validated
//! model selection, the three argument-mining tasks, and the portfolio
//! arithmetic (ratios, difference bars, classical MDS) served to clients.

pub mod analysis;
pub mod classifiers;
pub mod corpus;
pub mod diagnostics;
pub mod features;
pub mod pipeline;
pub mod portfolio;
pub mod stub;
pub mod synth;

mod seed;

pub use analysis::{AnalysisError, AnalysisResult, Analyzer};
pub use classifiers::{Family, ModelError, ModelSpec, Prediction, TrainedModel};
pub use corpus::{
    AnnotatedPost, ComponentLabel, Corpus, CorpusError, RelationLabel, Sentence,
    SentenceAnnotation, StrategyLabel, SupportEdge,
};
pub use features::{EmbeddingProvider, FeatureError, FeatureVector, ProviderConfig};
pub use pipeline::{ModelBundle, PipelineError, TaskKind};
pub use portfolio::{Category, DifferenceBar, Portfolio, PortfolioError, RatioVector};
