//! Per-class precision, recall and F1 plus support-weighted F1.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("{truth} true labels but {pred} predictions")]
    LengthMismatch { truth: usize, pred: usize },
    #[error("no labels to evaluate")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassScore {
    pub class: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub per_class: Vec<ClassScore>,
    /// `Σ_c support_c / N · F1_c`.
    pub weighted_f1: f64,
    pub accuracy: f64,
    pub n: usize,
}

impl ClassMetrics {
    pub fn class(&self, class: usize) -> Option<&ClassScore> {
        self.per_class.iter().find(|s| s.class == class)
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Metrics over the union of classes in `y_true` and `y_pred`.
pub fn evaluate_metrics(y_true: &[usize], y_pred: &[usize]) -> Result<ClassMetrics, MetricsError> {
    let classes: BTreeSet<usize> = y_true.iter().chain(y_pred).copied().collect();
    evaluate_metrics_for(&classes.into_iter().collect::<Vec<_>>(), y_true, y_pred)
}

/// Metrics reported for exactly `classes`, in that order. Undefined ratios
/// (0/0) are 0.
pub fn evaluate_metrics_for(
    classes: &[usize],
    y_true: &[usize],
    y_pred: &[usize],
) -> Result<ClassMetrics, MetricsError> {
    if y_true.len() != y_pred.len() {
        return Err(MetricsError::LengthMismatch {
            truth: y_true.len(),
            pred: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(MetricsError::Empty);
    }
    let n = y_true.len();
    let per_class: Vec<ClassScore> = classes
        .iter()
        .map(|&c| {
            let mut tp = 0;
            let mut fp = 0;
            let mut fn_ = 0;
            for (&t, &p) in y_true.iter().zip(y_pred) {
                match (t == c, p == c) {
                    (true, true) => tp += 1,
                    (false, true) => fp += 1,
                    (true, false) => fn_ += 1,
                    _ => {}
                }
            }
            let precision = ratio(tp, tp + fp);
            let recall = ratio(tp, tp + fn_);
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            ClassScore {
                class: c,
                precision,
                recall,
                f1,
                support: tp + fn_,
            }
        })
        .collect();
    let weighted_f1 = per_class.iter().map(|s| s.support as f64 / n as f64 * s.f1).sum();
    let correct = y_true.iter().zip(y_pred).filter(|(t, p)| t == p).count();
    Ok(ClassMetrics {
        per_class,
        weighted_f1,
        accuracy: ratio(correct, n),
        n,
    })
}
