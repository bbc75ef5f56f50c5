//! One-vs-rest linear SVM: hinge loss plus L2, trained by per-sample
//! subgradient steps at a constant learning rate.

use rand::seq::SliceRandom;

use super::{LinearParams, Prepared};
use crate::seed::{derive_seed, rng};

pub(crate) fn fit(data: &Prepared<'_>, lr: f64, l2: f64, epochs: usize, seed: u64) -> LinearParams {
    let c = data.classes.len();
    let n = data.x.len();
    let mut weights = vec![vec![0.0; data.dim]; c];
    let mut bias = vec![0.0; c];
    // Two classes need one separator; the second row is its negation so
    // argmax over margins matches the sign of the first.
    let fitted = if c == 2 { 1 } else { c };
    for k in 0..fitted {
        let w = &mut weights[k];
        let b = &mut bias[k];
        let mut order: Vec<usize> = (0..n).collect();
        let mut r = rng(derive_seed(seed, k as u64));
        for _ in 0..epochs {
            order.shuffle(&mut r);
            for &i in &order {
                let x = data.x[i].values();
                let t = if data.y[i] == k { 1.0 } else { -1.0 };
                let margin = *b + w.iter().zip(x).map(|(wi, xi)| wi * xi).sum::<f64>();
                let shrink = 1.0 - lr * l2;
                if t * margin < 1.0 {
                    for (wi, xi) in w.iter_mut().zip(x) {
                        *wi = *wi * shrink + lr * t * xi;
                    }
                    *b += lr * t;
                } else if l2 > 0.0 {
                    for wi in w.iter_mut() {
                        *wi *= shrink;
                    }
                }
            }
        }
    }
    if c == 2 {
        weights[1] = weights[0].iter().map(|w| -w).collect();
        bias[1] = -bias[0];
    }
    LinearParams { weights, bias }
}

#[cfg(test)]
mod tests {
    use crate::classifiers::test_data::blobs;
    use crate::classifiers::{train_model, Family, ModelSpec};

    #[test]
    fn separates_blobs() {
        let (x, y) = blobs(200, 5, 1.0, 0.5, 11);
        let m = train_model(&ModelSpec::new(Family::LinearSvm, 3), &x, &y).unwrap();
        let (tx, ty) = blobs(200, 5, 1.0, 0.5, 12);
        let correct = tx.iter().zip(&ty).filter(|(v, &c)| m.predict(v).unwrap().class == c).count();
        assert!(correct as f64 / 200.0 > 0.95, "{correct}");
    }

    #[test]
    fn deterministic_per_seed() {
        let (x, y) = blobs(60, 3, 0.5, 1.0, 2);
        let a = train_model(&ModelSpec::new(Family::LinearSvm, 1), &x, &y).unwrap();
        let b = train_model(&ModelSpec::new(Family::LinearSvm, 1), &x, &y).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn three_classes_one_vs_rest() {
        use crate::features::FeatureVector;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..30 {
            let j = (i % 5) as f64 * 0.05;
            for (c, centre) in [(0usize, [-3.0, 0.0]), (1, [3.0, 0.0]), (2, [0.0, 3.0])] {
                x.push(FeatureVector::new(vec![centre[0] + j, centre[1] - j]).unwrap());
                y.push(c);
            }
        }
        let m = train_model(&ModelSpec::new(Family::LinearSvm, 0), &x, &y).unwrap();
        for (v, &c) in x.iter().zip(&y) {
            assert_eq!(m.predict(v).unwrap().class, c);
        }
    }
}
