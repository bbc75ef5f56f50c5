use std::collections::BTreeSet;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::classifiers::TrainedModel;
use crate::corpus::{ComponentLabel, Corpus, RelationLabel};
use crate::features::pair_features;
use crate::seed::{derive_seed, rng, stable_hash};

use super::{EmbeddedSentence, PipelineError, TreeEdge};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationPair {
    pub post_id: String,
    pub claim_index: usize,
    pub premise_index: usize,
    pub label: RelationLabel,
}

/// A claim that got fewer negatives than positives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimShortfall {
    pub post_id: String,
    pub claim_index: usize,
    pub positives: usize,
    pub negatives: usize,
    pub shortfall: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub pairs: Vec<RelationPair>,
    pub positives: usize,
    pub negatives: usize,
    pub shortfall: usize,
    pub shortfalls: Vec<ClaimShortfall>,
    pub seed: u64,
}

/// Every labeled support edge becomes a positive pair. For each supported
/// claim, the same number of negatives is drawn without replacement from
/// premises in the same post that do not support it; when the post has too
/// few such premises the deficit is reported as shortfall.
pub fn generate_relation_pairs(corpus: &Corpus, seed: u64) -> PairReport {
    let mut pairs = Vec::new();
    let mut shortfalls = Vec::new();
    let (mut positives, mut negatives) = (0, 0);
    for post in &corpus.posts {
        let support: Vec<_> = post.edges.iter().filter(|e| e.label == RelationLabel::Support).collect();
        let claims: BTreeSet<usize> = support.iter().map(|e| e.claim_index).collect();
        let premises = post.indices_with(ComponentLabel::Premise);
        let post_stream = stable_hash(post.post_id.as_bytes());
        for claim in claims {
            let supporting: BTreeSet<usize> =
                support.iter().filter(|e| e.claim_index == claim).map(|e| e.premise_index).collect();
            for &p in &supporting {
                pairs.push(RelationPair {
                    post_id: post.post_id.clone(),
                    claim_index: claim,
                    premise_index: p,
                    label: RelationLabel::Support,
                });
            }
            let candidates: Vec<usize> = premises.iter().copied().filter(|p| !supporting.contains(p)).collect();
            let want = supporting.len();
            let take = want.min(candidates.len());
            let mut r = rng(derive_seed(seed, post_stream ^ claim as u64));
            let mut chosen: Vec<usize> = sample(&mut r, candidates.len(), take)
                .into_iter()
                .map(|i| candidates[i])
                .collect();
            chosen.sort_unstable();
            for p in chosen {
                pairs.push(RelationPair {
                    post_id: post.post_id.clone(),
                    claim_index: claim,
                    premise_index: p,
                    label: RelationLabel::NonSupport,
                });
            }
            positives += want;
            negatives += take;
            if take < want {
                shortfalls.push(ClaimShortfall {
                    post_id: post.post_id.clone(),
                    claim_index: claim,
                    positives: want,
                    negatives: take,
                    shortfall: want - take,
                });
            }
        }
    }
    PairReport {
        shortfall: shortfalls.iter().map(|s| s.shortfall).sum(),
        pairs,
        positives,
        negatives,
        shortfalls,
        seed,
    }
}

/// Scores every (premise, claim) pair and keeps those predicted as support.
/// A premise left without any support is attached to the nearest claim
/// before it (or the first claim when none precede) and flagged.
pub fn detect_relations(
    claims: &[&EmbeddedSentence],
    premises: &[&EmbeddedSentence],
    model: &TrainedModel,
) -> Result<Vec<TreeEdge>, PipelineError> {
    if claims.is_empty() {
        return if premises.is_empty() { Ok(Vec::new()) } else { Err(PipelineError::NoClaims) };
    }
    let support = RelationLabel::Support.class_id();
    let mut edges = Vec::new();
    for p in premises {
        let mut attached = false;
        for c in claims {
            let pair = pair_features(&c.vector, &p.vector)?;
            if model.predict(&pair)?.class == support {
                edges.push(TreeEdge {
                    premise_index: p.index,
                    claim_index: c.index,
                    fallback: false,
                });
                attached = true;
            }
        }
        if !attached {
            let nearest = claims
                .iter()
                .filter(|c| c.index < p.index)
                .map(|c| c.index)
                .max()
                .unwrap_or_else(|| claims.iter().map(|c| c.index).min().expect("non-empty"));
            edges.push(TreeEdge {
                premise_index: p.index,
                claim_index: nearest,
                fallback: true,
            });
        }
    }
    Ok(edges)
}
