use std::collections::{BTreeMap, BTreeSet};

use crate::classifiers::TrainedModel;
use crate::corpus::StrategyLabel;
use crate::features::FeatureVector;

use super::{EmbeddedSentence, PipelineError};

/// A strategy is assigned when its positive-class score reaches this.
pub const STRATEGY_THRESHOLD: f64 = 0.5;

/// One binary (0 = absent, 1 = present) model per strategy.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyModels {
    models: BTreeMap<StrategyLabel, TrainedModel>,
}

impl StrategyModels {
    pub fn new(models: BTreeMap<StrategyLabel, TrainedModel>) -> Result<Self, PipelineError> {
        for s in StrategyLabel::ALL {
            if !models.contains_key(&s) {
                return Err(PipelineError::MissingStrategyModel(s));
            }
        }
        Ok(Self { models })
    }

    pub fn get(&self, s: StrategyLabel) -> &TrainedModel {
        &self.models[&s]
    }

    pub fn iter(&self) -> impl Iterator<Item = (StrategyLabel, &TrainedModel)> {
        self.models.iter().map(|(s, m)| (*s, m))
    }
}

/// Positive-class score per strategy, in [`StrategyLabel::ALL`] order.
pub fn strategy_scores(v: &FeatureVector, models: &StrategyModels) -> Result<[f64; 4], PipelineError> {
    let mut out = [0.0; 4];
    for (slot, s) in out.iter_mut().zip(StrategyLabel::ALL) {
        *slot = models.get(s).class_score(v, 1)?;
    }
    Ok(out)
}

/// Strategies scoring at least the threshold; if none do, the single
/// highest-scoring one (earlier strategy wins ties).
pub fn select_strategies(scores: [f64; 4]) -> BTreeSet<StrategyLabel> {
    let picked: BTreeSet<StrategyLabel> = StrategyLabel::ALL
        .into_iter()
        .zip(scores)
        .filter(|&(_, p)| p >= STRATEGY_THRESHOLD)
        .map(|(s, _)| s)
        .collect();
    if !picked.is_empty() {
        return picked;
    }
    let best = crate::classifiers::argmax(&scores);
    BTreeSet::from([StrategyLabel::ALL[best]])
}

pub fn classify_premises(
    premises: &[&EmbeddedSentence],
    models: &StrategyModels,
) -> Result<Vec<BTreeSet<StrategyLabel>>, PipelineError> {
    premises
        .iter()
        .map(|p| Ok(select_strategies(strategy_scores(&p.vector, models)?)))
        .collect()
}
