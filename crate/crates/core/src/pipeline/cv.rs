use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{evaluate_metrics_for, train_model, ModelSpec, TrainedModel};
use crate::corpus::StrategyLabel;
use crate::features::FeatureVector;
use crate::seed::{derive_seed, rng};

use super::{Dataset, PipelineError, StrategyModels, TaskData, TaskKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecResult {
    pub spec: ModelSpec,
    /// Fold means of precision, recall and F1; support summed over folds.
    pub per_class: Vec<ClassRow>,
    /// Mean of the per-fold weighted F1.
    pub weighted_f1: f64,
    pub fold_weighted_f1: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub task: TaskKind,
    pub folds: usize,
    pub seed: u64,
    pub results: Vec<SpecResult>,
    pub winner: ModelSpec,
}

/// Published test-set figures for the same task, kept next to our own
/// numbers for orientation. They come from a different corpus and encoder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalReport {
    pub task: TaskKind,
    pub spec: ModelSpec,
    pub train_size: usize,
    pub test_size: usize,
    pub per_class: Vec<ClassRow>,
    pub weighted_f1: f64,
    pub reference: Vec<ReferenceRow>,
}

/// Fitted model(s) for one task.
#[derive(Clone, Debug, PartialEq)]
pub enum TaskModels {
    Single(TrainedModel),
    Strategies(StrategyModels),
}

fn cmp_vectors(a: &FeatureVector, b: &FeatureVector) -> Ordering {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.dim().cmp(&b.dim()))
}

/// Fold id per row. Rows are first put in a content-defined order, so the
/// assignment of a given (vector, label) does not depend on where it sits in
/// the input. Each class is then shuffled and dealt round-robin, starting
/// where the previous class stopped, so per-class fold sizes differ by at
/// most one and overall fold sizes stay balanced.
pub fn stratified_folds(data: &Dataset, k: usize, seed: u64) -> Result<Vec<usize>, PipelineError> {
    if k < 2 {
        return Err(PipelineError::InvalidFolds(k));
    }
    if data.is_empty() {
        return Err(PipelineError::EmptyDataset);
    }
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in data.labels.iter().enumerate() {
        by_class.entry(c).or_default().push(i);
    }
    let mut fold = vec![0; data.len()];
    let mut offset = 0;
    for (&class, rows) in by_class.iter_mut() {
        if rows.len() < k {
            return Err(PipelineError::TooFewMembers {
                class: data.class_name(class),
                count: rows.len(),
                folds: k,
            });
        }
        rows.sort_by(|&a, &b| cmp_vectors(&data.features[a], &data.features[b]));
        rows.shuffle(&mut rng(derive_seed(seed, class as u64)));
        for (j, &r) in rows.iter().enumerate() {
            fold[r] = (offset + j) % k;
        }
        offset = (offset + rows.len()) % k;
    }
    Ok(fold)
}

struct FoldScore {
    rows: Vec<ClassRow>,
    weighted_f1: f64,
}

fn rows_split(fold: &[usize], f: usize) -> (Vec<usize>, Vec<usize>) {
    (0..fold.len()).partition(|&i| fold[i] != f)
}

fn fit_dataset(spec: &ModelSpec, d: &Dataset) -> Result<TrainedModel, PipelineError> {
    Ok(train_model(spec, &d.features, &d.labels)?)
}

fn predict_all(m: &TrainedModel, d: &Dataset) -> Result<Vec<usize>, PipelineError> {
    d.features
        .iter()
        .map(|v| Ok(m.predict(v)?.class))
        .collect()
}

/// Per-class rows over `classes` plus support-weighted F1.
fn score_multiclass(classes: &[usize], d: &Dataset, pred: &[usize]) -> Result<FoldScore, PipelineError> {
    let m = evaluate_metrics_for(classes, &d.labels, pred)?;
    Ok(FoldScore {
        rows: m
            .per_class
            .iter()
            .map(|s| ClassRow {
                class: d.class_name(s.class),
                precision: s.precision,
                recall: s.recall,
                f1: s.f1,
                support: s.support,
            })
            .collect(),
        weighted_f1: m.weighted_f1,
    })
}

/// Positive-class row for one strategy.
fn score_binary(s: StrategyLabel, d: &Dataset, pred: &[usize]) -> Result<ClassRow, PipelineError> {
    let m = evaluate_metrics_for(&[1], &d.labels, pred)?;
    let p = &m.per_class[0];
    Ok(ClassRow {
        class: s.to_string(),
        precision: p.precision,
        recall: p.recall,
        f1: p.f1,
        support: p.support,
    })
}

/// Multi-label weighted F1: strategy F1 weighted by positive support.
fn multilabel_weighted(rows: &[ClassRow]) -> f64 {
    let total: usize = rows.iter().map(|r| r.support).sum();
    if total == 0 {
        return 0.0;
    }
    rows.iter().map(|r| r.support as f64 / total as f64 * r.f1).sum()
}

fn fold_spec(spec: &ModelSpec, fold: usize) -> ModelSpec {
    ModelSpec {
        seed: derive_seed(spec.seed, fold as u64),
        ..spec.clone()
    }
}

fn distinct(labels: &[usize]) -> Vec<usize> {
    labels.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Stratified k-fold evaluation of every spec. Folds for the premise task
/// are stratified per strategy on its binary label. The winner has the
/// highest mean weighted F1; the earlier spec wins ties.
pub fn cross_validate(
    data: &TaskData,
    specs: &[ModelSpec],
    k: usize,
    seed: u64,
) -> Result<CvReport, PipelineError> {
    if specs.is_empty() {
        return Err(PipelineError::NoSpecs);
    }
    for s in specs {
        s.normalized()?;
    }
    let jobs: Vec<(usize, usize)> = (0..specs.len()).flat_map(|s| (0..k).map(move |f| (s, f))).collect();
    let scores: Vec<FoldScore> = match data {
        TaskData::Components(d) | TaskData::Relations(d) => {
            let folds = stratified_folds(d, k, seed)?;
            let classes = distinct(&d.labels);
            jobs.par_iter()
                .map(|&(s, f)| {
                    let (train, test) = rows_split(&folds, f);
                    let test = d.subset(&test);
                    let m = fit_dataset(&fold_spec(&specs[s], f), &d.subset(&train))?;
                    score_multiclass(&classes, &test, &predict_all(&m, &test)?)
                })
                .collect::<Result<_, _>>()?
        }
        TaskData::Premises(p) => {
            let views: Vec<(StrategyLabel, Dataset, Vec<usize>)> = StrategyLabel::ALL
                .into_iter()
                .enumerate()
                .map(|(i, s)| {
                    let d = p.binary(s);
                    let folds = stratified_folds(&d, k, derive_seed(seed, i as u64))?;
                    Ok((s, d, folds))
                })
                .collect::<Result<_, PipelineError>>()?;
            jobs.par_iter()
                .map(|&(s, f)| {
                    let rows = views
                        .iter()
                        .map(|(label, d, folds)| {
                            let (train, test) = rows_split(folds, f);
                            let test = d.subset(&test);
                            let m = fit_dataset(&fold_spec(&specs[s], f), &d.subset(&train))?;
                            score_binary(*label, &test, &predict_all(&m, &test)?)
                        })
                        .collect::<Result<Vec<_>, PipelineError>>()?;
                    Ok(FoldScore {
                        weighted_f1: multilabel_weighted(&rows),
                        rows,
                    })
                })
                .collect::<Result<_, PipelineError>>()?
        }
    };

    let results: Vec<SpecResult> = specs
        .iter()
        .enumerate()
        .map(|(s, spec)| {
            let folds = &scores[s * k..(s + 1) * k];
            let per_class = (0..folds[0].rows.len())
                .map(|c| {
                    let mean = |f: fn(&ClassRow) -> f64| folds.iter().map(|x| f(&x.rows[c])).sum::<f64>() / k as f64;
                    ClassRow {
                        class: folds[0].rows[c].class.clone(),
                        precision: mean(|r| r.precision),
                        recall: mean(|r| r.recall),
                        f1: mean(|r| r.f1),
                        support: folds.iter().map(|x| x.rows[c].support).sum(),
                    }
                })
                .collect();
            let fold_weighted_f1: Vec<f64> = folds.iter().map(|x| x.weighted_f1).collect();
            SpecResult {
                spec: spec.clone(),
                per_class,
                weighted_f1: fold_weighted_f1.iter().sum::<f64>() / k as f64,
                fold_weighted_f1,
            }
        })
        .collect();
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.weighted_f1 > results[best].weighted_f1 {
            best = i;
        }
    }
    Ok(CvReport {
        task: data.task(),
        folds: k,
        seed,
        winner: results[best].spec.clone(),
        results,
    })
}

/// Fits `spec` on all of `data`: one model, or one binary model per
/// strategy for the premise task.
pub fn fit_task(spec: &ModelSpec, data: &TaskData) -> Result<TaskModels, PipelineError> {
    match data {
        TaskData::Components(d) | TaskData::Relations(d) => Ok(TaskModels::Single(fit_dataset(spec, d)?)),
        TaskData::Premises(p) => {
            let models = StrategyLabel::ALL
                .into_par_iter()
                .map(|s| Ok((s, fit_dataset(spec, &p.binary(s))?)))
                .collect::<Result<BTreeMap<_, _>, PipelineError>>()?;
            Ok(TaskModels::Strategies(StrategyModels::new(models)?))
        }
    }
}

/// Test-set rows and weighted F1 for already fitted models.
pub fn evaluate_task(models: &TaskModels, test: &TaskData) -> Result<(Vec<ClassRow>, f64), PipelineError> {
    match (models, test) {
        (TaskModels::Single(m), TaskData::Components(d) | TaskData::Relations(d)) => {
            let classes: Vec<usize> = (0..d.class_names.len()).collect();
            let s = score_multiclass(&classes, d, &predict_all(m, d)?)?;
            Ok((s.rows, s.weighted_f1))
        }
        (TaskModels::Strategies(ms), TaskData::Premises(p)) => {
            let rows = StrategyLabel::ALL
                .into_iter()
                .map(|s| {
                    let d = p.binary(s);
                    score_binary(s, &d, &predict_all(ms.get(s), &d)?)
                })
                .collect::<Result<Vec<_>, PipelineError>>()?;
            let w = multilabel_weighted(&rows);
            Ok((rows, w))
        }
        _ => Err(PipelineError::TaskMismatch(test.task())),
    }
}

fn reference_rows(task: TaskKind) -> Vec<ReferenceRow> {
    let rows: &[(&str, f64, f64, f64)] = match task {
        TaskKind::ComponentExtraction => &[
            ("claim", 0.73, 0.31, 0.43),
            ("premise", 0.79, 0.97, 0.87),
            ("non_argument", 0.91, 0.53, 0.67),
            ("claim (first sentence defaults to claim)", 0.79, 0.49, 0.61),
        ],
        TaskKind::RelationDetection => &[("support", 0.93, 0.80, 0.86), ("non_support", 0.98, 0.95, 0.96)],
        TaskKind::PremiseClassification => &[
            ("logos", 0.79, 0.87, 0.83),
            ("pathos", 0.83, 0.29, 0.43),
            ("evidence", 0.75, 0.66, 0.70),
            ("ethos", 1.00, 0.65, 0.79),
        ],
    };
    rows.iter()
        .map(|&(class, precision, recall, f1)| ReferenceRow {
            class: class.to_string(),
            precision,
            recall,
            f1,
        })
        .collect()
}

/// Trains `spec` on the whole training split and scores the test split.
pub fn fit_final_and_test(
    spec: &ModelSpec,
    train: &TaskData,
    test: &TaskData,
) -> Result<(FinalReport, TaskModels), PipelineError> {
    if train.task() != test.task() {
        return Err(PipelineError::TaskMismatch(test.task()));
    }
    let models = fit_task(spec, train)?;
    let (per_class, weighted_f1) = evaluate_task(&models, test)?;
    Ok((
        FinalReport {
            task: train.task(),
            spec: spec.clone(),
            train_size: train.len(),
            test_size: test.len(),
            per_class,
            weighted_f1,
            reference: reference_rows(train.task()),
        },
        models,
    ))
}
