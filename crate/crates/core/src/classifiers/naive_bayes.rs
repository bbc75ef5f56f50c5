//! Gaussian naive Bayes with per-class means, population variances
//! floored at `var_floor`, and empirical log priors.

use serde::{Deserialize, Serialize};

use super::Prepared;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NbParams {
    pub log_prior: Vec<f64>,
    pub mean: Vec<Vec<f64>>,
    pub var: Vec<Vec<f64>>,
}

pub(crate) fn fit(data: &Prepared<'_>, var_floor: f64) -> NbParams {
    let c = data.classes.len();
    let d = data.dim;
    let mut count = vec![0usize; c];
    let mut mean = vec![vec![0.0; d]; c];
    for (v, &k) in data.x.iter().zip(&data.y) {
        count[k] += 1;
        for (m, x) in mean[k].iter_mut().zip(v.values()) {
            *m += x;
        }
    }
    for (m, &n) in mean.iter_mut().zip(&count) {
        for mi in m.iter_mut() {
            *mi /= n as f64;
        }
    }
    let mut var = vec![vec![0.0; d]; c];
    for (v, &k) in data.x.iter().zip(&data.y) {
        for ((s, x), m) in var[k].iter_mut().zip(v.values()).zip(&mean[k]) {
            *s += (x - m) * (x - m);
        }
    }
    for (s, &n) in var.iter_mut().zip(&count) {
        for si in s.iter_mut() {
            *si = (*si / n as f64).max(var_floor);
        }
    }
    let total = data.x.len() as f64;
    NbParams {
        log_prior: count.iter().map(|&n| (n as f64 / total).ln()).collect(),
        mean,
        var,
    }
}

impl NbParams {
    /// `log P(c) + Σ_j log N(x_j; μ_cj, σ²_cj)` for each class.
    pub fn log_joint(&self, x: &[f64]) -> Vec<f64> {
        let ln_2pi = (2.0 * std::f64::consts::PI).ln();
        self.log_prior
            .iter()
            .zip(self.mean.iter().zip(&self.var))
            .map(|(lp, (m, v))| {
                lp + x
                    .iter()
                    .zip(m.iter().zip(v))
                    .map(|(xi, (mi, vi))| -0.5 * (ln_2pi + vi.ln() + (xi - mi) * (xi - mi) / vi))
                    .sum::<f64>()
            })
            .collect()
    }

    pub(crate) fn check(&self, classes: usize, dim: usize) -> Result<(), String> {
        if self.log_prior.len() != classes || self.mean.len() != classes || self.var.len() != classes {
            return Err("naive Bayes tables do not match class count".into());
        }
        if self.mean.iter().chain(&self.var).any(|r| r.len() != dim) {
            return Err("naive Bayes tables do not match feature_dim".into());
        }
        if self.var.iter().flatten().any(|&v| !(v > 0.0)) {
            return Err("naive Bayes variances must be positive".into());
        }
        Ok(())
    }
}
