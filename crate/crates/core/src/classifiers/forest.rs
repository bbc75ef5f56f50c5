//! Random forest of Gini CART trees. Each tree sees a bootstrap sample and
//! tries `ceil(sqrt(D))` non-constant features per split.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{argmax, Prepared};
use crate::seed::{derive_seed, rng};

#[derive(Clone, Debug)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    Leaf {
        class: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Nodes stored flat; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub trees: Vec<Tree>,
}

fn gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

struct Builder<'a> {
    data: &'a Prepared<'a>,
    cfg: &'a ForestConfig,
    n_classes: usize,
    mtry: usize,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

impl Builder<'_> {
    fn value(&self, i: usize, f: usize) -> f64 {
        self.data.x[i].values()[f]
    }

    fn counts(&self, rows: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.n_classes];
        for &i in rows {
            c[self.data.y[i]] += 1;
        }
        c
    }

    fn best_split(&mut self, rows: &[usize]) -> Option<BestSplit> {
        let n = rows.len();
        let mut features: Vec<usize> = (0..self.data.dim).collect();
        features.shuffle(&mut self.rng);
        let mut best: Option<BestSplit> = None;
        let mut inspected = 0;
        let mut sorted: Vec<(f64, usize)> = Vec::with_capacity(n);
        for f in features {
            if inspected == self.mtry {
                break;
            }
            sorted.clear();
            sorted.extend(rows.iter().map(|&i| (self.value(i, f), self.data.y[i])));
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            if sorted[0].0 == sorted[n - 1].0 {
                continue;
            }
            inspected += 1;
            let total = self.counts(rows);
            let mut left = vec![0; self.n_classes];
            for s in 1..n {
                left[sorted[s - 1].1] += 1;
                if sorted[s - 1].0 == sorted[s].0 || s < self.cfg.min_leaf || n - s < self.cfg.min_leaf {
                    continue;
                }
                let right: Vec<usize> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
                let imp = (s as f64 * gini(&left, s) + (n - s) as f64 * gini(&right, n - s)) / n as f64;
                if best.as_ref().map_or(true, |b| imp < b.impurity) {
                    best = Some(BestSplit {
                        feature: f,
                        threshold: 0.5 * (sorted[s - 1].0 + sorted[s].0),
                        impurity: imp,
                    });
                }
            }
        }
        best
    }

    fn build(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let id = self.nodes.len();
        let counts = self.counts(&rows);
        let majority = argmax(&counts.iter().map(|&c| c as f64).collect::<Vec<_>>());
        self.nodes.push(Node::Leaf { class: majority });
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if depth >= self.cfg.max_depth || rows.len() < 2 * self.cfg.min_leaf || pure {
            return id;
        }
        let parent = gini(&counts, rows.len());
        let Some(split) = self.best_split(&rows) else {
            return id;
        };
        if split.impurity >= parent {
            return id;
        }
        let (l, r): (Vec<usize>, Vec<usize>) = rows
            .into_iter()
            .partition(|&i| self.value(i, split.feature) <= split.threshold);
        let left = self.build(l, depth + 1);
        let right = self.build(r, depth + 1);
        self.nodes[id] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        id
    }
}

pub(crate) fn fit(data: &Prepared<'_>, cfg: &ForestConfig, seed: u64) -> ForestParams {
    let n = data.x.len();
    let mtry = ((data.dim as f64).sqrt().ceil() as usize).clamp(1, data.dim.max(1));
    let trees = (0..cfg.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(derive_seed(seed, t as u64));
            let sample: Vec<usize> = (0..n).map(|_| r.gen_range(0..n)).collect();
            let mut b = Builder {
                data,
                cfg,
                n_classes: data.classes.len(),
                mtry,
                rng: r,
                nodes: Vec::new(),
            };
            b.build(sample, 0);
            Tree { nodes: b.nodes }
        })
        .collect();
    ForestParams { trees }
}

impl Tree {
    pub fn predict(&self, x: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { class } => return *class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }
}

impl ForestParams {
    pub fn vote_fractions(&self, x: &[f64], classes: usize) -> Vec<f64> {
        let mut votes = vec![0.0; classes];
        for t in &self.trees {
            votes[t.predict(x)] += 1.0;
        }
        let n = self.trees.len() as f64;
        votes.iter().map(|v| v / n).collect()
    }

    pub(crate) fn check(&self, classes: usize, dim: usize) -> Result<(), String> {
        if self.trees.is_empty() {
            return Err("forest has no trees".into());
        }
        for (t, tree) in self.trees.iter().enumerate() {
            if tree.nodes.is_empty() {
                return Err(format!("tree {t} is empty"));
            }
            for (i, node) in tree.nodes.iter().enumerate() {
                let ok = match node {
                    Node::Leaf { class } => *class < classes,
                    // Children are stored after their parent, which also rules out cycles.
                    Node::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    } => {
                        *feature < dim
                            && threshold.is_finite()
                            && *left > i
                            && *right > i
                            && *left < tree.nodes.len()
                            && *right < tree.nodes.len()
                    }
                };
                if !ok {
                    return Err(format!("tree {t} node {i} is malformed"));
                }
            }
        }
        Ok(())
    }
}
