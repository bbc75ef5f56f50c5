use crate::classifiers::TrainedModel;
use crate::corpus::{ComponentLabel, Sentence};
use crate::features::{EmbeddingProvider, FeatureVector};

use super::{PipelineError, TaskKind};

/// A sentence index with its vector, computed once per analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedSentence {
    pub index: usize,
    pub vector: FeatureVector,
}

pub fn embed_sentences(
    sentences: &[Sentence],
    provider: &dyn EmbeddingProvider,
) -> Result<Vec<EmbeddedSentence>, PipelineError> {
    let texts: Vec<&str> = sentences.iter().map(|s| s.text.as_str()).collect();
    let vectors = provider.embed_batch(&texts)?;
    Ok(sentences
        .iter()
        .zip(vectors)
        .map(|(s, vector)| EmbeddedSentence { index: s.index, vector })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentOutput {
    pub labels: Vec<(usize, ComponentLabel)>,
    /// Sentence 0 was relabeled Claim because nothing else was.
    pub default_claim_applied: bool,
}

/// If no sentence is a Claim, the first sentence becomes one, whatever it
/// was predicted as. Returns whether the rule fired.
pub fn apply_default_claim_rule(labels: &mut [(usize, ComponentLabel)]) -> bool {
    if labels.is_empty() || labels.iter().any(|(_, c)| *c == ComponentLabel::Claim) {
        return false;
    }
    labels[0].1 = ComponentLabel::Claim;
    true
}

pub fn extract_components(
    sentences: &[EmbeddedSentence],
    model: &TrainedModel,
) -> Result<ComponentOutput, PipelineError> {
    if sentences.is_empty() {
        return Err(PipelineError::NoSentences);
    }
    let mut labels = Vec::with_capacity(sentences.len());
    for s in sentences {
        let class = model.predict(&s.vector)?.class;
        let label = ComponentLabel::from_class_id(class).ok_or(PipelineError::UnknownPrediction {
            task: TaskKind::ComponentExtraction,
            class,
        })?;
        labels.push((s.index, label));
    }
    let default_claim_applied = apply_default_claim_rule(&mut labels);
    Ok(ComponentOutput {
        labels,
        default_claim_applied,
    })
}
