use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::classifiers::TrainedModel;
use crate::corpus::StrategyLabel;
use crate::features::ProviderConfig;

use super::{PipelineError, StrategyModels};

/// Files making up a bundle directory, in snapshot-hash order.
pub const BUNDLE_FILES: [&str; 7] = [
    "provider.json",
    "components.json",
    "relations.json",
    "strategy_logos.json",
    "strategy_pathos.json",
    "strategy_ethos.json",
    "strategy_evidence.json",
];

/// Everything needed to analyze text: the embedding provider and the six
/// fitted models.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelBundle {
    pub provider: ProviderConfig,
    pub components: TrainedModel,
    pub relations: TrainedModel,
    pub strategies: StrategyModels,
}

fn strategy_file(s: StrategyLabel) -> String {
    format!("strategy_{s}.json")
}

impl ModelBundle {
    /// Checks that model input widths agree with each other (and with the
    /// provider when its dimension is fixed).
    pub fn new(
        provider: ProviderConfig,
        components: TrainedModel,
        relations: TrainedModel,
        strategies: StrategyModels,
    ) -> Result<Self, PipelineError> {
        let d = components.feature_dim();
        let bad = |message: String| PipelineError::Bundle {
            path: "<memory>".into(),
            message,
        };
        if let ProviderConfig::BuiltinHash { dimension, .. } = provider {
            if dimension != d {
                return Err(bad(format!("component model expects {d} features, provider yields {dimension}")));
            }
        }
        if relations.feature_dim() != 3 * d {
            return Err(bad(format!(
                "relation model expects {} features, pair vectors have {}",
                relations.feature_dim(),
                3 * d
            )));
        }
        for (s, m) in strategies.iter() {
            if m.feature_dim() != d {
                return Err(bad(format!("{s} model expects {} features, not {d}", m.feature_dim())));
            }
        }
        Ok(Self {
            provider,
            components,
            relations,
            strategies,
        })
    }

    /// Serialized files, in [`BUNDLE_FILES`] order.
    pub fn files(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            (BUNDLE_FILES[0], serde_json::to_string_pretty(&self.provider).expect("provider serializes")),
            (BUNDLE_FILES[1], self.components.to_artifact_json()),
            (BUNDLE_FILES[2], self.relations.to_artifact_json()),
        ];
        for (name, s) in BUNDLE_FILES[3..].iter().zip([
            StrategyLabel::Logos,
            StrategyLabel::Pathos,
            StrategyLabel::Ethos,
            StrategyLabel::Evidence,
        ]) {
            out.push((name, self.strategies.get(s).to_artifact_json()));
        }
        out
    }

    /// SHA-256 over the bundle files (name, NUL, contents, NUL, ...), hex.
    pub fn snapshot_id(&self) -> String {
        let mut h = Sha256::new();
        for (name, body) in self.files() {
            h.update(name.as_bytes());
            h.update([0]);
            h.update(body.as_bytes());
            h.update([0]);
        }
        hex::encode(h.finalize())
    }

    pub fn save(&self, dir: &Path) -> Result<(), PipelineError> {
        let io = |e: std::io::Error| PipelineError::Bundle {
            path: dir.display().to_string(),
            message: e.to_string(),
        };
        fs::create_dir_all(dir).map_err(io)?;
        for (name, body) in self.files() {
            fs::write(dir.join(name), body).map_err(io)?;
        }
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self, PipelineError> {
        let read = |name: &str| {
            let path = dir.join(name);
            fs::read_to_string(&path).map_err(|e| PipelineError::Bundle {
                path: path.display().to_string(),
                message: e.to_string(),
            })
        };
        let model = |name: &str| -> Result<TrainedModel, PipelineError> {
            TrainedModel::from_artifact_json(&read(name)?).map_err(|e| PipelineError::Bundle {
                path: dir.join(name).display().to_string(),
                message: e.to_string(),
            })
        };
        let provider: ProviderConfig =
            serde_json::from_str(&read(BUNDLE_FILES[0])?).map_err(|e| PipelineError::Bundle {
                path: dir.join(BUNDLE_FILES[0]).display().to_string(),
                message: e.to_string(),
            })?;
        let mut strategies = BTreeMap::new();
        for s in StrategyLabel::ALL {
            strategies.insert(s, model(&strategy_file(s))?);
        }
        ModelBundle::new(
            provider,
            model(BUNDLE_FILES[1])?,
            model(BUNDLE_FILES[2])?,
            StrategyModels::new(strategies)?,
        )
        .map_err(|e| match e {
            PipelineError::Bundle { message, .. } => PipelineError::Bundle {
                path: dir.display().to_string(),
                message,
            },
            other => other,
        })
    }
}
