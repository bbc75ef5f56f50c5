//! Sentence featurization behind a pluggable embedding provider.

mod hashing;
mod remote;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use hashing::HashingEmbedder;
pub use remote::RemoteEmbedder;

/// Environment variable that overrides the remote provider's endpoint.
pub const EMBED_URL_ENV: &str = "PERSUA_EMBED_URL";

pub const DEFAULT_DIMENSION: usize = 1024;
pub const DEFAULT_MAX_IN_FLIGHT: usize = 4;

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error("cannot embed empty text")]
    EmptyText,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("builtin dimension must be a positive power of two, got {0}")]
    InvalidDimension(usize),
    #[error("feature vector has a non-finite entry at {0}")]
    NonFinite(usize),
    #[error("embedding provider {endpoint} failed{}: {message}", status.map(|s| format!(" (HTTP {s})")).unwrap_or_default())]
    Provider {
        endpoint: String,
        status: Option<u16>,
        message: String,
    },
}

/// Fixed-dimension real vector with finite entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self, FeatureError> {
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(FeatureError::NonFinite(pos));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &FeatureVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = FeatureError;

    fn try_from(values: Vec<f64>) -> Result<Self, Self::Error> {
        FeatureVector::new(values)
    }
}

impl From<FeatureVector> for Vec<f64> {
    fn from(v: FeatureVector) -> Self {
        v.0
    }
}

/// Source of sentence vectors. Implementations are stateless after
/// construction apart from the remote provider's discovered dimension.
pub trait EmbeddingProvider: Send + Sync {
    /// Output dimension, if already known.
    fn dimension(&self) -> Option<usize>;

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<FeatureVector>, FeatureError>;

    fn embed(&self, text: &str) -> Result<FeatureVector, FeatureError> {
        let mut out = self.embed_batch(&[text])?;
        Ok(out.remove(0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProviderConfig {
    BuiltinHash {
        #[serde(default = "default_dimension")]
        dimension: usize,
        #[serde(default)]
        seed: u64,
    },
    Remote {
        endpoint_url: String,
        #[serde(default = "default_timeout_ms")]
        timeout_ms: u64,
        #[serde(default = "default_max_in_flight")]
        max_in_flight: usize,
    },
}

fn default_dimension() -> usize {
    DEFAULT_DIMENSION
}

fn default_timeout_ms() -> u64 {
    10_000
}

fn default_max_in_flight() -> usize {
    DEFAULT_MAX_IN_FLIGHT
}

impl Default for ProviderConfig {
    fn default() -> Self {
        ProviderConfig::BuiltinHash {
            dimension: DEFAULT_DIMENSION,
            seed: 0,
        }
    }
}

impl ProviderConfig {
    pub fn builtin(dimension: usize, seed: u64) -> Self {
        ProviderConfig::BuiltinHash { dimension, seed }
    }

    /// Applies the `PERSUA_EMBED_URL` override to a remote configuration.
    pub fn with_env_override(self) -> Self {
        match (self, std::env::var(EMBED_URL_ENV)) {
            (
                ProviderConfig::Remote {
                    timeout_ms,
                    max_in_flight,
                    ..
                },
                Ok(url),
            ) if !url.trim().is_empty() => ProviderConfig::Remote {
                endpoint_url: url,
                timeout_ms,
                max_in_flight,
            },
            (cfg, _) => cfg,
        }
    }

    pub fn build(&self) -> Result<Arc<dyn EmbeddingProvider>, FeatureError> {
        Ok(match self.clone().with_env_override() {
            ProviderConfig::BuiltinHash { dimension, seed } => {
                Arc::new(HashingEmbedder::new(dimension, seed)?)
            }
            ProviderConfig::Remote {
                endpoint_url,
                timeout_ms,
                max_in_flight,
            } => Arc::new(RemoteEmbedder::new(endpoint_url, timeout_ms, max_in_flight)),
        })
    }
}

/// One-shot embedding through a freshly built provider.
pub fn embed_sentence(text: &str, cfg: &ProviderConfig) -> Result<FeatureVector, FeatureError> {
    cfg.build()?.embed(text)
}

/// Claim-premise pair vector `[claim; premise; |claim - premise|]`.
pub fn pair_features(
    claim: &FeatureVector,
    premise: &FeatureVector,
) -> Result<FeatureVector, FeatureError> {
    if claim.dim() != premise.dim() {
        return Err(FeatureError::DimensionMismatch {
            expected: claim.dim(),
            found: premise.dim(),
        });
    }
    let d = claim.dim();
    let mut out = Vec::with_capacity(3 * d);
    out.extend_from_slice(claim.values());
    out.extend_from_slice(premise.values());
    out.extend(
        claim
            .values()
            .iter()
            .zip(premise.values())
            .map(|(c, p)| (c - p).abs()),
    );
    Ok(FeatureVector(out))
}
