use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use crate::seed::{derive_seed, rng};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SplitError {
    #[error("cannot split an empty item list")]
    Empty,
    #[error("test fraction must lie strictly between 0 and 1, got {0}")]
    BadFraction(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split<I> {
    pub train: Vec<I>,
    pub test: Vec<I>,
}

/// Per-class holdout: each class contributes `round(n_class * fraction)`
/// items to the test side. Both sides keep input order.
pub fn stratified_split<I: Clone, C: Ord>(
    items: &[(I, C)],
    test_fraction: f64,
    seed: u64,
) -> Result<Split<I>, SplitError> {
    if items.is_empty() {
        return Err(SplitError::Empty);
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(SplitError::BadFraction(test_fraction.to_string()));
    }
    let mut by_class: BTreeMap<&C, Vec<usize>> = BTreeMap::new();
    for (pos, (_, class)) in items.iter().enumerate() {
        by_class.entry(class).or_default().push(pos);
    }
    let mut in_test = vec![false; items.len()];
    for (ordinal, members) in by_class.values_mut().enumerate() {
        let n_test = (members.len() as f64 * test_fraction).round() as usize;
        members.shuffle(&mut rng(derive_seed(seed, ordinal as u64)));
        for &pos in &members[..n_test] {
            in_test[pos] = true;
        }
    }
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for ((id, _), t) in items.iter().zip(in_test) {
        if t { test.push(id.clone()) } else { train.push(id.clone()) }
    }
    Ok(Split { train, test })
}
