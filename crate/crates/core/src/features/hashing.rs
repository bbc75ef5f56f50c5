use std::hash::Hasher;

use fnv::FnvHasher;

use super::{EmbeddingProvider, FeatureError, FeatureVector};
use crate::seed::derive_seed;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;

/// Offline sentence embedder: signed feature hashing of word unigrams,
/// word bigrams and character trigrams, L2-normalized.
#[derive(Clone, Debug)]
pub struct HashingEmbedder {
    dimension: usize,
    key: u64,
}

impl HashingEmbedder {
    pub fn new(dimension: usize, seed: u64) -> Result<Self, FeatureError> {
        if dimension == 0 || !dimension.is_power_of_two() {
            return Err(FeatureError::InvalidDimension(dimension));
        }
        Ok(Self {
            dimension,
            key: FNV_OFFSET ^ derive_seed(seed, 0),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    fn slot(&self, namespace: u8, feature: &str) -> (usize, f64) {
        let mut h = FnvHasher::with_key(self.key);
        h.write_u8(namespace);
        h.write(feature.as_bytes());
        let h = h.finish();
        let bucket = (h as usize) & (self.dimension - 1);
        (bucket, if h >> 63 == 1 { -1.0 } else { 1.0 })
    }

    fn add(&self, acc: &mut [f64], namespace: u8, feature: &str) {
        let (bucket, sign) = self.slot(namespace, feature);
        acc[bucket] += sign;
    }

    /// Bucket and sign that the lowercase word unigram `word` hashes to.
    pub fn unigram_slot(&self, word: &str) -> (usize, f64) {
        self.slot(b'u', &word.to_lowercase())
    }

    /// Unnormalized signed counts.
    pub fn raw_counts(&self, text: &str) -> Result<Vec<f64>, FeatureError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(FeatureError::EmptyText);
        }
        let lower = trimmed.to_lowercase();
        let mut acc = vec![0.0; self.dimension];

        let words = tokenize(&lower);
        for w in &words {
            self.add(&mut acc, b'u', w);
        }
        for pair in words.windows(2) {
            self.add(&mut acc, b'b', &format!("{} {}", pair[0], pair[1]));
        }

        let mut padded: Vec<char> = vec![' '];
        for c in lower.chars() {
            let c = if c.is_whitespace() { ' ' } else { c };
            if !(c == ' ' && padded.last() == Some(&' ')) {
                padded.push(c);
            }
        }
        padded.push(' ');
        for tri in padded.windows(3) {
            self.add(&mut acc, b'c', &tri.iter().collect::<String>());
        }
        Ok(acc)
    }

    pub fn embed_text(&self, text: &str) -> Result<FeatureVector, FeatureError> {
        let mut acc = self.raw_counts(text)?;
        let mut norm = acc.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            // Every feature cancelled under signed hashing; fall back to a
            // single deterministic bucket so the unit-norm contract holds.
            self.add(&mut acc, b'z', text.trim());
            norm = 1.0;
        }
        for v in &mut acc {
            *v /= norm;
        }
        FeatureVector::new(acc)
    }
}

/// Lowercased input split into runs of alphanumerics (inner apostrophes
/// kept, so "don't" is one token).
fn tokenize(lower: &str) -> Vec<&str> {
    lower
        .split(|c: char| !(c.is_alphanumeric() || c == '\'' || c == '\u{2019}'))
        .map(|w| w.trim_matches(|c| c == '\'' || c == '\u{2019}'))
        .filter(|w| !w.is_empty())
        .collect()
}

impl EmbeddingProvider for HashingEmbedder {
    fn dimension(&self) -> Option<usize> {
        Some(self.dimension)
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<FeatureVector>, FeatureError> {
        texts.iter().map(|t| self.embed_text(t)).collect()
    }
}
