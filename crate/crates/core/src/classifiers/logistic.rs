//! Multinomial logistic regression: softmax cross-entropy with an L2
//! penalty on the weights (bias unpenalized), fitted by full-batch gradient
//! descent.

use super::{softmax, Family, LinearParams, ModelError, ModelSpec, Prepared};
use crate::features::FeatureVector;

/// Stop once an accepted step lowers the loss by less than this.
pub const LOSS_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Debug)]
pub struct LogisticConfig {
    pub lr: f64,
    pub l2: f64,
    pub epochs: usize,
}

#[derive(Clone, Debug)]
pub struct LogisticFit {
    pub params: LinearParams,
    /// Loss before training followed by the loss after each accepted step.
    pub losses: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Objective {
    pub loss: f64,
    pub grad: LinearParams,
}

/// Row in sparse form; hashed text features are mostly zero.
type SparseRow = Vec<(usize, f64)>;

fn sparse_rows(x: &[FeatureVector]) -> Vec<SparseRow> {
    x.iter()
        .map(|v| {
            v.values()
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0.0)
                .map(|(d, &x)| (d, x))
                .collect()
        })
        .collect()
}

fn objective_sparse(p: &LinearParams, rows: &[SparseRow], y: &[usize], l2: f64) -> Objective {
    let c = p.bias.len();
    let d = p.weights.first().map_or(0, Vec::len);
    let n = rows.len() as f64;
    let mut gw = vec![vec![0.0; d]; c];
    let mut gb = vec![0.0; c];
    let mut loss = 0.0;
    let mut logits = vec![0.0; c];
    for (row, &yi) in rows.iter().zip(y) {
        for (k, l) in logits.iter_mut().enumerate() {
            *l = p.bias[k] + row.iter().map(|&(j, v)| p.weights[k][j] * v).sum::<f64>();
        }
        let probs = softmax(&logits);
        loss -= probs[yi].max(f64::MIN_POSITIVE).ln();
        for k in 0..c {
            let r = (probs[k] - if k == yi { 1.0 } else { 0.0 }) / n;
            gb[k] += r;
            for &(j, v) in row {
                gw[k][j] += r * v;
            }
        }
    }
    loss /= n;
    let mut penalty = 0.0;
    for k in 0..c {
        for j in 0..d {
            let w = p.weights[k][j];
            penalty += w * w;
            gw[k][j] += l2 * w;
        }
    }
    Objective {
        loss: loss + 0.5 * l2 * penalty,
        grad: LinearParams { weights: gw, bias: gb },
    }
}

/// Regularized loss `mean(-log softmax(Wx+b)_y) + l2/2 ||W||²` and its
/// analytic gradient. `y` holds row indices into `params`.
pub fn objective(params: &LinearParams, x: &[FeatureVector], y: &[usize], l2: f64) -> Objective {
    objective_sparse(params, &sparse_rows(x), y, l2)
}

/// Gradient descent from zero weights. A step that would raise the loss is
/// rejected and the step size halved, so the recorded loss sequence never
/// increases.
pub(crate) fn fit(data: &Prepared<'_>, cfg: &LogisticConfig) -> LogisticFit {
    let c = data.classes.len();
    let rows = sparse_rows(data.x);
    let mut params = LinearParams {
        weights: vec![vec![0.0; data.dim]; c],
        bias: vec![0.0; c],
    };
    let mut current = objective_sparse(&params, &rows, &data.y, cfg.l2);
    let mut losses = vec![current.loss];
    let mut lr = cfg.lr;
    for _ in 0..cfg.epochs {
        let candidate = LinearParams {
            weights: params
                .weights
                .iter()
                .zip(&current.grad.weights)
                .map(|(w, g)| w.iter().zip(g).map(|(wi, gi)| wi - lr * gi).collect())
                .collect(),
            bias: params
                .bias
                .iter()
                .zip(&current.grad.bias)
                .map(|(b, g)| b - lr * g)
                .collect(),
        };
        let next = objective_sparse(&candidate, &rows, &data.y, cfg.l2);
        if next.loss > current.loss {
            lr *= 0.5;
            if lr < 1e-12 {
                break;
            }
            continue;
        }
        let improvement = current.loss - next.loss;
        params = candidate;
        current = next;
        losses.push(current.loss);
        if improvement < LOSS_TOLERANCE {
            break;
        }
    }
    LogisticFit { params, losses }
}

/// Trains like [`train_model`] but also returns the loss trace.
pub fn fit_with_trace(spec: &ModelSpec, x: &[FeatureVector], y: &[usize]) -> Result<LogisticFit, ModelError> {
    let spec = spec.normalized()?;
    if spec.family != Family::LogisticRegression {
        return Err(ModelError::InvalidHyperparam {
            family: spec.family,
            key: "family".into(),
            reason: "fit_with_trace only fits logistic regression".into(),
        });
    }
    let data = super::prepare(spec.family, x, y)?;
    Ok(fit(
        &data,
        &LogisticConfig {
            lr: spec.hyperparams["lr"],
            l2: spec.hyperparams["l2"],
            epochs: spec.hyperparams["epochs"] as usize,
        },
    ))
}
