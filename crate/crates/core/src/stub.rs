//! Hand-set models for tests, demos and service fixtures. They need no
//! training data and behave predictably.

use std::collections::BTreeMap;

use crate::classifiers::TrainedModel;
use crate::corpus::{ComponentLabel, RelationLabel, StrategyLabel};
use crate::features::{HashingEmbedder, ProviderConfig};
use crate::pipeline::{ModelBundle, StrategyModels};

/// Logit margin used by the constant models.
const CONFIDENT: f64 = 10.0;

fn constant(classes: usize, dim: usize, favoured: usize) -> TrainedModel {
    let mut bias = vec![0.0; classes];
    bias[favoured] = CONFIDENT;
    TrainedModel::logistic_from_parts((0..classes).collect(), vec![vec![0.0; dim]; classes], bias, 0)
        .expect("well-formed constant model")
}

/// Predicts `class` for every sentence vector of width `dim`.
pub fn constant_component_model(dim: usize, class: ComponentLabel) -> TrainedModel {
    constant(3, dim, class.class_id())
}

/// Predicts `label` for every pair built from width-`dim` sentence vectors.
pub fn constant_relation_model(dim: usize, label: RelationLabel) -> TrainedModel {
    constant(2, 3 * dim, label.class_id())
}

/// Binary model whose positive-class probability is `sigmoid(logit)` for
/// every input.
pub fn binary_bias_model(dim: usize, logit: f64) -> TrainedModel {
    TrainedModel::logistic_from_parts(vec![0, 1], vec![vec![0.0; dim]; 2], vec![0.0, logit], 0)
        .expect("well-formed bias model")
}

/// Labels every sentence Premise (so only the default-claim rule produces
/// a claim), links every premise to every claim, and tags premises logos.
pub fn all_premise_bundle(dimension: usize, seed: u64) -> ModelBundle {
    let strategies = StrategyLabel::ALL
        .into_iter()
        .map(|s| (s, binary_bias_model(dimension, if s == StrategyLabel::Logos { 1.0 } else { -1.0 })))
        .collect();
    ModelBundle::new(
        ProviderConfig::builtin(dimension, seed),
        constant_component_model(dimension, ComponentLabel::Premise),
        constant_relation_model(dimension, RelationLabel::Support),
        StrategyModels::new(strategies).expect("all four strategies"),
    )
    .expect("consistent widths")
}

pub const CLAIM_CUES: &[&str] = &["should", "must", "think", "believe", "nobody", "opinion", "view"];
pub const NON_ARGUMENT_CUES: &[&str] = &["thanks", "edit", "hello", "sorry", "interesting"];
pub const LOGOS_CUES: &[&str] = &["because", "if", "would", "therefore", "could", "since", "so", "means", "follows"];
pub const PATHOS_CUES: &[&str] = &["heart", "feel", "love", "scared", "pain", "alone", "cry", "fear", "miserable"];
pub const ETHOS_CUES: &[&str] = &["experience", "professional", "nurse", "doctor", "counsellor", "worked"];
pub const EVIDENCE_CUES: &[&str] = &["my", "last", "year", "saw", "ago", "watched", "when"];

/// Weight per cue word, in logits per unit of cosine.
const CUE_WEIGHT: f64 = 40.0;

/// Width at which cue buckets rarely collide with other features of a
/// short sentence; smaller widths make the lexicon stub noisy.
pub const LEXICON_DIMENSION: usize = 16384;

fn cue_row(e: &HashingEmbedder, cues: &[&str]) -> Vec<f64> {
    let mut row = vec![0.0; e.dimension()];
    for cue in cues {
        let (bucket, sign) = e.unigram_slot(cue);
        row[bucket] += CUE_WEIGHT * sign;
    }
    row
}

/// Keyword-driven models over the builtin hashing provider: sentences with
/// stance words read as claims, pleasantries as non-arguments, everything
/// else as premises; each strategy fires on its own cue list. Every
/// premise is linked to every claim.
pub fn lexicon_bundle(dimension: usize, seed: u64) -> ModelBundle {
    let e = HashingEmbedder::new(dimension, seed).expect("power-of-two dimension");
    let components = TrainedModel::logistic_from_parts(
        vec![0, 1, 2],
        vec![cue_row(&e, CLAIM_CUES), vec![0.0; dimension], cue_row(&e, NON_ARGUMENT_CUES)],
        vec![-1.0, 0.0, -1.0],
        seed,
    )
    .expect("well-formed component model");
    let mut strategies = BTreeMap::new();
    for (s, cues) in [
        (StrategyLabel::Logos, LOGOS_CUES),
        (StrategyLabel::Pathos, PATHOS_CUES),
        (StrategyLabel::Ethos, ETHOS_CUES),
        (StrategyLabel::Evidence, EVIDENCE_CUES),
    ] {
        let m = TrainedModel::logistic_from_parts(
            vec![0, 1],
            vec![vec![0.0; dimension], cue_row(&e, cues)],
            vec![0.0, -2.0],
            seed,
        )
        .expect("well-formed strategy model");
        strategies.insert(s, m);
    }
    ModelBundle::new(
        ProviderConfig::builtin(dimension, seed),
        components,
        constant_relation_model(dimension, RelationLabel::Support),
        StrategyModels::new(strategies).expect("all four strategies"),
    )
    .expect("consistent widths")
}
