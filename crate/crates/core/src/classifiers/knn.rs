//! k-nearest neighbours over Euclidean distance. Neighbours at equal
//! distance are ordered by training index.

use serde::{Deserialize, Serialize};

use super::Prepared;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
    pub points: Vec<Vec<f64>>,
    /// Dense class index of each stored point.
    pub labels: Vec<usize>,
}

pub(crate) fn fit(data: &Prepared<'_>, k: usize) -> KnnParams {
    KnnParams {
        k,
        points: data.x.iter().map(|v| v.values().to_vec()).collect(),
        labels: data.y.clone(),
    }
}

impl KnnParams {
    /// Indices of the `min(k, N)` nearest stored points.
    pub fn neighbours(&self, x: &[f64]) -> Vec<usize> {
        let mut d: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(), i))
            .collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        d.into_iter().take(self.k.min(self.points.len())).map(|(_, i)| i).collect()
    }

    pub fn vote_fractions(&self, x: &[f64], classes: usize) -> Vec<f64> {
        let nn = self.neighbours(x);
        let mut votes = vec![0.0; classes];
        for &i in &nn {
            votes[self.labels[i]] += 1.0;
        }
        let n = nn.len() as f64;
        votes.iter().map(|v| v / n).collect()
    }

    pub(crate) fn check(&self, classes: usize, dim: usize) -> Result<(), String> {
        if self.k == 0 {
            return Err("k must be positive".into());
        }
        if self.points.is_empty() || self.points.len() != self.labels.len() {
            return Err("kNN points and labels must be non-empty and aligned".into());
        }
        if self.points.iter().any(|p| p.len() != dim) {
            return Err("kNN points do not match feature_dim".into());
        }
        if self.labels.iter().any(|&l| l >= classes) {
            return Err("kNN label out of range".into());
        }
        Ok(())
    }
}
