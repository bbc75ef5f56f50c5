//! Classical (Torgerson) multidimensional scaling into two dimensions.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::RatioVector;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn distance(&self, o: &Point2) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }
}

/// Coordinates for a set of ratio vectors, centred on the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Projection2D {
    pub points: Vec<Point2>,
}

/// Fitted embedding. Keeps what out-of-sample placement needs.
#[derive(Clone, Debug, PartialEq)]
pub struct Mds {
    pub points: Vec<Point2>,
    /// The two leading eigenvalues of the centred Gram matrix, clamped at 0.
    pub eigenvalues: [f64; 2],
    /// Diagonal of the centred Gram matrix (squared norms of centred points).
    gram_diag: Vec<f64>,
}

/// Eigenvalues this small relative to the largest are treated as zero.
const EIGEN_TOL: f64 = 1e-12;

/// MDS from a symmetric distance matrix: double-centre `-D²/2`, take the
/// top two eigenpairs, scale eigenvectors by `sqrt(λ)`. Each eigenvector is
/// oriented so its largest-magnitude entry (first on ties) is positive.
pub fn classical_mds(distances: &[Vec<f64>]) -> Mds {
    let n = distances.len();
    if n == 0 {
        return Mds {
            points: Vec::new(),
            eigenvalues: [0.0; 2],
            gram_diag: Vec::new(),
        };
    }
    let d2 = DMatrix::from_fn(n, n, |i, j| {
        let d = 0.5 * (distances[i][j] + distances[j][i]);
        d * d
    });
    let row_mean: Vec<f64> = (0..n).map(|i| d2.row(i).sum() / n as f64).collect();
    let grand = row_mean.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| -0.5 * (d2[(i, j)] - row_mean[i] - row_mean[j] + grand));
    let gram_diag: Vec<f64> = (0..n).map(|i| b[(i, i)]).collect();

    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &c| eig.eigenvalues[c].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&c)));
    let top = eig.eigenvalues[order[0]].max(0.0);
    let mut coords = vec![[0.0f64; 2]; n];
    let mut eigenvalues = [0.0; 2];
    for axis in 0..2.min(n) {
        let k = order[axis];
        let lambda = eig.eigenvalues[k];
        if lambda <= EIGEN_TOL * top.max(1.0) {
            continue;
        }
        eigenvalues[axis] = lambda;
        let v = eig.eigenvectors.column(k);
        let mut pivot = 0;
        for i in 1..n {
            if v[i].abs() > v[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if v[pivot] < 0.0 { -1.0 } else { 1.0 };
        let scale = lambda.sqrt() * sign;
        for (i, c) in coords.iter_mut().enumerate() {
            c[axis] = v[i] * scale;
        }
    }
    // The eigensolver can leave coincident inputs an ulp apart; give them
    // the coordinates of their first occurrence.
    for i in 1..n {
        let twin = (0..i).find(|&j| distances[i][j] == 0.0 && distances[i] == distances[j]);
        if let Some(j) = twin {
            coords[i] = coords[j];
        }
    }
    Mds {
        points: coords.into_iter().map(|[x, y]| Point2 { x, y }).collect(),
        eigenvalues,
        gram_diag,
    }
}

impl Mds {
    /// Places a new point from its distances to the fitted points:
    /// `y_k = (1 / 2λ_k) Σ_i x_ik (‖x_i‖² − d_i²)`. Exact when the new
    /// point lies in the fitted plane.
    pub fn place(&self, distances: &[f64]) -> Point2 {
        let mut out = [0.0; 2];
        for (axis, o) in out.iter_mut().enumerate() {
            let lambda = self.eigenvalues[axis];
            if lambda <= 0.0 {
                continue;
            }
            let s: f64 = self
                .points
                .iter()
                .zip(&self.gram_diag)
                .zip(distances)
                .map(|((p, g), d)| {
                    let coord = if axis == 0 { p.x } else { p.y };
                    coord * (g - d * d)
                })
                .sum();
            *o = s / (2.0 * lambda);
        }
        Point2 { x: out[0], y: out[1] }
    }
}

fn distance_matrix(vs: &[RatioVector]) -> Vec<Vec<f64>> {
    vs.iter().map(|a| vs.iter().map(|b| a.distance(b)).collect()).collect()
}

/// Euclidean MDS of the given ratio vectors.
pub fn mds_project(vectors: &[RatioVector]) -> (Projection2D, Mds) {
    let m = classical_mds(&distance_matrix(vectors));
    (Projection2D { points: m.points.clone() }, m)
}
