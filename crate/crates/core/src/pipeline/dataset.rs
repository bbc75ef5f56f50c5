use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{stratified_split, ComponentLabel, Corpus, StrategyLabel};
use crate::features::{pair_features, EmbeddingProvider, FeatureVector};

use super::{PipelineError, RelationPair, TaskKind};

/// Holdout share used for the final train/test split.
pub const DEFAULT_TEST_FRACTION: f64 = 0.2;

/// Feature vectors with integer labels; `class_names[id]` names class `id`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub features: Vec<FeatureVector>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_name(&self, id: usize) -> String {
        self.class_names.get(id).cloned().unwrap_or_else(|| id.to_string())
    }

    pub fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            features: rows.iter().map(|&i| self.features[i].clone()).collect(),
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
        }
    }
}

/// Premise vectors with their gold strategy sets.
#[derive(Clone, Debug, PartialEq)]
pub struct PremiseDataset {
    pub features: Vec<FeatureVector>,
    pub strategies: Vec<BTreeSet<StrategyLabel>>,
}

impl PremiseDataset {
    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    /// One-vs-all view for `s`: class 1 when the premise carries `s`.
    pub fn binary(&self, s: StrategyLabel) -> Dataset {
        Dataset {
            features: self.features.clone(),
            labels: self.strategies.iter().map(|set| usize::from(set.contains(&s))).collect(),
            class_names: vec![format!("not_{s}"), s.to_string()],
        }
    }

    pub fn subset(&self, rows: &[usize]) -> PremiseDataset {
        PremiseDataset {
            features: rows.iter().map(|&i| self.features[i].clone()).collect(),
            strategies: rows.iter().map(|&i| self.strategies[i].clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TaskData {
    Components(Dataset),
    Relations(Dataset),
    Premises(PremiseDataset),
}

impl TaskData {
    pub fn task(&self) -> TaskKind {
        match self {
            TaskData::Components(_) => TaskKind::ComponentExtraction,
            TaskData::Relations(_) => TaskKind::RelationDetection,
            TaskData::Premises(_) => TaskKind::PremiseClassification,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            TaskData::Components(d) | TaskData::Relations(d) => d.len(),
            TaskData::Premises(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn embed_posts(
    corpus: &Corpus,
    provider: &dyn EmbeddingProvider,
) -> Result<BTreeMap<String, Vec<FeatureVector>>, PipelineError> {
    let mut out = BTreeMap::new();
    for post in &corpus.posts {
        let texts: Vec<&str> = post.sentences.iter().map(|s| s.text.as_str()).collect();
        out.insert(post.post_id.clone(), provider.embed_batch(&texts)?);
    }
    Ok(out)
}

pub fn component_dataset(corpus: &Corpus, provider: &dyn EmbeddingProvider) -> Result<Dataset, PipelineError> {
    let vectors = embed_posts(corpus, provider)?;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for post in &corpus.posts {
        for a in &post.annotations {
            features.push(vectors[&post.post_id][a.sentence_index].clone());
            labels.push(a.component.class_id());
        }
    }
    Ok(Dataset {
        features,
        labels,
        class_names: ComponentLabel::ALL.iter().map(|c| c.to_string()).collect(),
    })
}

pub fn relation_dataset(
    corpus: &Corpus,
    pairs: &[RelationPair],
    provider: &dyn EmbeddingProvider,
) -> Result<Dataset, PipelineError> {
    let vectors = embed_posts(corpus, provider)?;
    let mut features = Vec::with_capacity(pairs.len());
    for p in pairs {
        let v = vectors
            .get(&p.post_id)
            .ok_or_else(|| PipelineError::UnknownPost(p.post_id.clone()))?;
        features.push(pair_features(&v[p.claim_index], &v[p.premise_index])?);
    }
    Ok(Dataset {
        features,
        labels: pairs.iter().map(|p| p.label.class_id()).collect(),
        class_names: vec!["non_support".into(), "support".into()],
    })
}

pub fn premise_dataset(corpus: &Corpus, provider: &dyn EmbeddingProvider) -> Result<PremiseDataset, PipelineError> {
    let vectors = embed_posts(corpus, provider)?;
    let mut features = Vec::new();
    let mut strategies = Vec::new();
    for post in &corpus.posts {
        for a in post.annotations.iter().filter(|a| a.component == ComponentLabel::Premise) {
            features.push(vectors[&post.post_id][a.sentence_index].clone());
            strategies.push(a.strategies.clone());
        }
    }
    Ok(PremiseDataset { features, strategies })
}

/// Stratified holdout: by label for components and relations, by the
/// whole strategy set for premises.
pub fn split_task_data(data: &TaskData, test_fraction: f64, seed: u64) -> Result<(TaskData, TaskData), PipelineError> {
    Ok(match data {
        TaskData::Components(d) | TaskData::Relations(d) => {
            let items: Vec<(usize, usize)> = d.labels.iter().copied().enumerate().collect();
            let s = stratified_split(&items, test_fraction, seed)?;
            let wrap = |x| if matches!(data, TaskData::Components(_)) { TaskData::Components(x) } else { TaskData::Relations(x) };
            (wrap(d.subset(&s.train)), wrap(d.subset(&s.test)))
        }
        TaskData::Premises(p) => {
            let items: Vec<(usize, Vec<StrategyLabel>)> =
                p.strategies.iter().map(|s| s.iter().copied().collect()).enumerate().collect();
            let s = stratified_split(&items, test_fraction, seed)?;
            (TaskData::Premises(p.subset(&s.train)), TaskData::Premises(p.subset(&s.test)))
        }
    })
}
