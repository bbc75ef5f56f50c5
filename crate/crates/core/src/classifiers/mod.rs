//! From-scratch classifiers used for per-task model selection.
//!
//! Every family trains deterministically from `(spec, X, y)`: all
//! randomness comes from ChaCha streams derived from `spec.seed`.
//! Class ids are arbitrary `usize` labels; a trained model keeps the sorted
//! list of ids it saw, and prediction scores are aligned with that list.
//! Ties are always broken toward the lowest class id.

pub mod forest;
pub mod knn;
pub mod logistic;
pub mod metrics;
pub mod naive_bayes;
pub mod svm;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::features::FeatureVector;

pub use metrics::{evaluate_metrics, evaluate_metrics_for, ClassMetrics, ClassScore, MetricsError};

pub const ARTIFACT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("training set is empty")]
    EmptyInput,
    #[error("need at least 2 training samples, got {0}")]
    TooFewSamples(usize),
    #[error("{x} feature vectors but {y} labels")]
    LengthMismatch { x: usize, y: usize },
    #[error("dimension mismatch: model expects {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} needs at least two distinct classes; training labels contain one")]
    SingleClass(Family),
    #[error("{family}: hyperparameter `{key}` {reason}")]
    InvalidHyperparam {
        family: Family,
        key: String,
        reason: String,
    },
    #[error("model has no class {0}")]
    UnknownClass(usize),
    #[error("unsupported artifact format_version {0}")]
    UnsupportedVersion(u32),
    #[error("malformed model artifact: {0}")]
    Artifact(String),
    #[error("model artifact JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    LogisticRegression,
    LinearSvm,
    RandomForest,
    GaussianNb,
    KNearestNeighbor,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::LogisticRegression,
        Family::LinearSvm,
        Family::RandomForest,
        Family::GaussianNb,
        Family::KNearestNeighbor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::LogisticRegression => "logistic_regression",
            Family::LinearSvm => "linear_svm",
            Family::RandomForest => "random_forest",
            Family::GaussianNb => "gaussian_nb",
            Family::KNearestNeighbor => "k_nearest_neighbor",
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Family::LogisticRegression => "lr",
            Family::LinearSvm => "svm",
            Family::RandomForest => "rf",
            Family::GaussianNb => "nb",
            Family::KNearestNeighbor => "knn",
        }
    }

    /// Allowed hyperparameters with their defaults.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            Family::LogisticRegression => &[("lr", 0.1), ("l2", 1e-4), ("epochs", 2000.0)],
            Family::LinearSvm => &[("lr", 0.05), ("l2", 1e-4), ("epochs", 50.0)],
            Family::RandomForest => &[("n_trees", 100.0), ("max_depth", 12.0), ("min_leaf", 2.0)],
            Family::GaussianNb => &[("var_floor", 1e-9)],
            Family::KNearestNeighbor => &[("k", 5.0)],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s || f.short_name() == s)
            .ok_or_else(|| format!("unknown model family `{s}`"))
    }
}

/// Family + hyperparameters + seed. Missing hyperparameters take the
/// family defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: Family,
    #[serde(default)]
    pub hyperparams: BTreeMap<String, f64>,
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        Self {
            family,
            hyperparams: BTreeMap::new(),
            seed,
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.hyperparams.insert(key.to_string(), value);
        self
    }

    /// One spec per family with default hyperparameters.
    pub fn all_defaults(seed: u64) -> Vec<ModelSpec> {
        Family::ALL.into_iter().map(|f| ModelSpec::new(f, seed)).collect()
    }

    /// Validates keys and values and fills in defaults.
    pub fn normalized(&self) -> Result<ModelSpec, ModelError> {
        let defaults = self.family.defaults();
        let invalid = |key: &str, reason: &str| ModelError::InvalidHyperparam {
            family: self.family,
            key: key.to_string(),
            reason: reason.to_string(),
        };
        for key in self.hyperparams.keys() {
            if !defaults.iter().any(|(k, _)| k == key) {
                return Err(invalid(key, "is not recognized"));
            }
        }
        let mut full = BTreeMap::new();
        for &(key, default) in defaults {
            let v = self.hyperparams.get(key).copied().unwrap_or(default);
            if !v.is_finite() {
                return Err(invalid(key, "must be finite"));
            }
            let integral = matches!(key, "epochs" | "n_trees" | "max_depth" | "min_leaf" | "k");
            if integral && (v < 1.0 || v.fract() != 0.0) {
                return Err(invalid(key, "must be a positive integer"));
            }
            match key {
                "lr" | "var_floor" if v <= 0.0 => return Err(invalid(key, "must be positive")),
                "l2" if v < 0.0 => return Err(invalid(key, "must be non-negative")),
                _ => {}
            }
            full.insert(key.to_string(), v);
        }
        Ok(ModelSpec {
            family: self.family,
            hyperparams: full,
            seed: self.seed,
        })
    }

    fn param(&self, key: &str) -> f64 {
        self.hyperparams[key]
    }

    fn count(&self, key: &str) -> usize {
        self.param(key) as usize
    }

    /// Human-readable label such as `lr(seed=42)`.
    pub fn label(&self) -> String {
        let params: Vec<String> = self
            .hyperparams
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        if params.is_empty() {
            format!("{}(seed={})", self.family.short_name(), self.seed)
        } else {
            format!("{}({}, seed={})", self.family.short_name(), params.join(", "), self.seed)
        }
    }
}

/// Weight matrix (one row per class) plus per-class bias.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearParams {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl LinearParams {
    pub(crate) fn scores(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(w, b)| b + w.iter().zip(x).map(|(wi, xi)| wi * xi).sum::<f64>())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelParams {
    LogisticRegression(LinearParams),
    LinearSvm(LinearParams),
    RandomForest(forest::ForestParams),
    GaussianNb(naive_bayes::NbParams),
    KNearestNeighbor(knn::KnnParams),
}

/// Immutable fitted classifier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    format_version: u32,
    spec: ModelSpec,
    classes: Vec<usize>,
    feature_dim: usize,
    params: ModelParams,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub class: usize,
    /// Aligned with [`TrainedModel::classes`].
    pub scores: Vec<f64>,
}

pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let z: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / z).collect()
}

/// Training inputs after validation: class ids mapped to dense indices.
pub(crate) struct Prepared<'a> {
    pub x: &'a [FeatureVector],
    pub y: Vec<usize>,
    pub classes: Vec<usize>,
    pub dim: usize,
}

fn prepare<'a>(
    family: Family,
    x: &'a [FeatureVector],
    y: &[usize],
) -> Result<Prepared<'a>, ModelError> {
    if x.is_empty() {
        return Err(ModelError::EmptyInput);
    }
    if x.len() != y.len() {
        return Err(ModelError::LengthMismatch { x: x.len(), y: y.len() });
    }
    if x.len() < 2 {
        return Err(ModelError::TooFewSamples(x.len()));
    }
    let dim = x[0].dim();
    if let Some(bad) = x.iter().find(|v| v.dim() != dim) {
        return Err(ModelError::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let mut classes = y.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 && family != Family::KNearestNeighbor {
        return Err(ModelError::SingleClass(family));
    }
    let y = y
        .iter()
        .map(|c| classes.binary_search(c).expect("class present"))
        .collect();
    Ok(Prepared { x, y, classes, dim })
}

/// Fits `spec` to `(x, y)`.
pub fn train_model(
    spec: &ModelSpec,
    x: &[FeatureVector],
    y: &[usize],
) -> Result<TrainedModel, ModelError> {
    let spec = spec.normalized()?;
    let data = prepare(spec.family, x, y)?;
    let params = match spec.family {
        Family::LogisticRegression => ModelParams::LogisticRegression(
            logistic::fit(
                &data,
                &logistic::LogisticConfig {
                    lr: spec.param("lr"),
                    l2: spec.param("l2"),
                    epochs: spec.count("epochs"),
                },
            )
            .params,
        ),
        Family::LinearSvm => ModelParams::LinearSvm(svm::fit(
            &data,
            spec.param("lr"),
            spec.param("l2"),
            spec.count("epochs"),
            spec.seed,
        )),
        Family::RandomForest => ModelParams::RandomForest(forest::fit(
            &data,
            &forest::ForestConfig {
                n_trees: spec.count("n_trees"),
                max_depth: spec.count("max_depth"),
                min_leaf: spec.count("min_leaf"),
            },
            spec.seed,
        )),
        Family::GaussianNb => {
            ModelParams::GaussianNb(naive_bayes::fit(&data, spec.param("var_floor")))
        }
        Family::KNearestNeighbor => ModelParams::KNearestNeighbor(knn::fit(&data, spec.count("k"))),
    };
    Ok(TrainedModel {
        format_version: ARTIFACT_FORMAT_VERSION,
        spec,
        classes: data.classes,
        feature_dim: data.dim,
        params,
    })
}

impl TrainedModel {
    /// Logistic-regression model with hand-set parameters; used for fixture
    /// and rule-like models.
    pub fn logistic_from_parts(
        classes: Vec<usize>,
        weights: Vec<Vec<f64>>,
        bias: Vec<f64>,
        seed: u64,
    ) -> Result<Self, ModelError> {
        let model = TrainedModel {
            format_version: ARTIFACT_FORMAT_VERSION,
            spec: ModelSpec::new(Family::LogisticRegression, seed).normalized()?,
            feature_dim: weights.first().map_or(0, Vec::len),
            classes,
            params: ModelParams::LogisticRegression(LinearParams { weights, bias }),
        };
        model.check()?;
        Ok(model)
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn predict(&self, x: &FeatureVector) -> Result<Prediction, ModelError> {
        if x.dim() != self.feature_dim {
            return Err(ModelError::DimensionMismatch {
                expected: self.feature_dim,
                found: x.dim(),
            });
        }
        let v = x.values();
        let scores = match &self.params {
            ModelParams::LogisticRegression(p) => softmax(&p.scores(v)),
            ModelParams::LinearSvm(p) => p.scores(v),
            ModelParams::RandomForest(p) => p.vote_fractions(v, self.classes.len()),
            ModelParams::GaussianNb(p) => softmax(&p.log_joint(v)),
            ModelParams::KNearestNeighbor(p) => p.vote_fractions(v, self.classes.len()),
        };
        Ok(Prediction {
            class: self.classes[argmax(&scores)],
            scores,
        })
    }

    /// Score in [0, 1] for `class`. Probability-like families report their
    /// own score; for the linear SVM this is the logistic of the margin gap
    /// between `class` and its strongest rival, so 0.5 sits on the decision
    /// boundary. A class the model never saw scores 0.
    pub fn class_score(&self, x: &FeatureVector, class: usize) -> Result<f64, ModelError> {
        let pred = self.predict(x)?;
        let Some(pos) = self.classes.iter().position(|&c| c == class) else {
            return Ok(0.0);
        };
        Ok(match self.params {
            ModelParams::LinearSvm(_) => {
                let rival = pred
                    .scores
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != pos)
                    .map(|(_, &s)| s)
                    .fold(f64::NEG_INFINITY, f64::max);
                if rival == f64::NEG_INFINITY {
                    1.0
                } else {
                    1.0 / (1.0 + (rival - pred.scores[pos]).exp())
                }
            }
            _ => pred.scores[pos],
        })
    }

    fn check(&self) -> Result<(), ModelError> {
        let bad = |m: &str| Err(ModelError::Artifact(m.to_string()));
        if self.format_version != ARTIFACT_FORMAT_VERSION {
            return Err(ModelError::UnsupportedVersion(self.format_version));
        }
        if self.classes.is_empty() {
            return bad("classes must be non-empty");
        }
        if self.classes.windows(2).any(|w| w[0] >= w[1]) {
            return bad("classes must be strictly increasing");
        }
        let c = self.classes.len();
        let d = self.feature_dim;
        match &self.params {
            ModelParams::LogisticRegression(p) | ModelParams::LinearSvm(p) => {
                if p.weights.len() != c || p.bias.len() != c || p.weights.iter().any(|w| w.len() != d) {
                    return bad("linear parameters do not match classes x feature_dim");
                }
            }
            ModelParams::RandomForest(p) => p.check(c, d).map_err(ModelError::Artifact)?,
            ModelParams::GaussianNb(p) => p.check(c, d).map_err(ModelError::Artifact)?,
            ModelParams::KNearestNeighbor(p) => p.check(c, d).map_err(ModelError::Artifact)?,
        }
        Ok(())
    }

    /// Versioned JSON envelope:
    /// `{"format_version":1,"spec":…,"classes":…,"feature_dim":…,"params":…}`.
    pub fn to_artifact_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_artifact_json(json: &str) -> Result<Self, ModelError> {
        let version = serde_json::from_str::<serde_json::Value>(json)?
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| ModelError::Artifact("missing format_version".into()))?;
        if version != u64::from(ARTIFACT_FORMAT_VERSION) {
            return Err(ModelError::UnsupportedVersion(version as u32));
        }
        let model: TrainedModel = serde_json::from_str(json)?;
        model.check()?;
        Ok(model)
    }
}

#[cfg(test)]
pub(crate) mod test_data {
    use super::*;
    use rand_distr::{Distribution, Normal};

    /// Two Gaussian blobs centred at ±`offset` in every coordinate.
    pub fn blobs(n: usize, dim: usize, offset: f64, sd: f64, seed: u64) -> (Vec<FeatureVector>, Vec<usize>) {
        let mut rng = crate::seed::rng(seed);
        let noise = Normal::new(0.0, sd).unwrap();
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let class = i % 2;
            let centre = if class == 0 { -offset } else { offset };
            let v: Vec<f64> = (0..dim).map(|_| centre + noise.sample(&mut rng)).collect();
            x.push(FeatureVector::new(v).unwrap());
            y.push(class);
        }
        (x, y)
    }
}
