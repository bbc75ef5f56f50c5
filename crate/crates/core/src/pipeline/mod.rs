//! The three argument-mining tasks, their training datasets, and
//! cross-validated model selection.

mod bundle;
mod components;
mod cv;
mod dataset;
mod premises;
mod relations;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classifiers::{MetricsError, ModelError};
use crate::corpus::{CorpusError, SplitError, StrategyLabel};
use crate::features::FeatureError;

pub use bundle::{ModelBundle, BUNDLE_FILES};
pub use components::{apply_default_claim_rule, embed_sentences, extract_components, ComponentOutput, EmbeddedSentence};
pub use cv::{
    cross_validate, evaluate_task, fit_final_and_test, fit_task, stratified_folds, ClassRow, CvReport, FinalReport,
    ReferenceRow, SpecResult, TaskModels,
};
pub use dataset::{
    component_dataset, premise_dataset, relation_dataset, split_task_data, Dataset, PremiseDataset, TaskData,
    DEFAULT_TEST_FRACTION,
};
pub use premises::{classify_premises, select_strategies, strategy_scores, StrategyModels, STRATEGY_THRESHOLD};
pub use relations::{detect_relations, generate_relation_pairs, ClaimShortfall, PairReport, RelationPair};
pub use tree::{build_argument_tree, ArgumentTree, TreeEdge, TreeNode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TaskKind {
    #[serde(rename = "components")]
    ComponentExtraction,
    #[serde(rename = "relations")]
    RelationDetection,
    #[serde(rename = "premises")]
    PremiseClassification,
}

impl TaskKind {
    pub const ALL: [TaskKind; 3] = [
        TaskKind::ComponentExtraction,
        TaskKind::RelationDetection,
        TaskKind::PremiseClassification,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::ComponentExtraction => "components",
            TaskKind::RelationDetection => "relations",
            TaskKind::PremiseClassification => "premises",
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TaskKind::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown task `{s}` (expected components, relations or premises)"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("no sentences to analyze")]
    NoSentences,
    #[error("no claims available for relation detection")]
    NoClaims,
    #[error("model predicted unknown {task} class {class}")]
    UnknownPrediction { task: TaskKind, class: usize },
    #[error("no model for strategy {0}")]
    MissingStrategyModel(StrategyLabel),
    #[error("inconsistent argument tree: {0}")]
    Tree(String),
    #[error("class `{class}` has {count} members, fewer than the {folds} folds requested")]
    TooFewMembers { class: String, count: usize, folds: usize },
    #[error("need at least 2 folds, got {0}")]
    InvalidFolds(usize),
    #[error("no model specs to evaluate")]
    NoSpecs,
    #[error("task data does not match task {0}")]
    TaskMismatch(TaskKind),
    #[error("relation pair refers to post `{0}`, which is not in the corpus")]
    UnknownPost(String),
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("model bundle {path}: {message}")]
    Bundle { path: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}
