//! Strategy portfolios: weighted label counts, ratio vectors, signed
//! differences, Δ-ranked examples and a 2-D projection.

mod mds;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::corpus::{AnnotatedPost, ComponentLabel, SentenceAnnotation, StrategyLabel};

pub use mds::{classical_mds, mds_project, Mds, Point2, Projection2D};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PortfolioError {
    #[error("no claim or premise sentences to build a portfolio from")]
    NoArgumentativeSentences,
    #[error("premise {0} has no strategy")]
    PremiseWithoutStrategy(usize),
    #[error("{component} sentence {index} carries strategies")]
    StrategiesOnNonPremise { index: usize, component: ComponentLabel },
    #[error("cannot average an empty list of portfolios")]
    EmptyAverage,
    #[error("invalid ratio vector: {0}")]
    InvalidRatios(String),
    #[error("invalid portfolio: {0}")]
    InvalidPortfolio(String),
}

/// Portfolio axis, in display order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Claim,
    Logos,
    Pathos,
    Ethos,
    Evidence,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Claim,
        Category::Logos,
        Category::Pathos,
        Category::Ethos,
        Category::Evidence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Claim => "claim",
            Category::Logos => "logos",
            Category::Pathos => "pathos",
            Category::Ethos => "ethos",
            Category::Evidence => "evidence",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl From<StrategyLabel> for Category {
    fn from(s: StrategyLabel) -> Self {
        match s {
            StrategyLabel::Logos => Category::Logos,
            StrategyLabel::Pathos => Category::Pathos,
            StrategyLabel::Ethos => Category::Ethos,
            StrategyLabel::Evidence => Category::Evidence,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Premise shares are multiples of 1/k for k ≤ 4 labels, so weights are
/// kept exactly in twelfths.
const UNIT: u64 = 12;

/// Weighted counts per category. A claim adds 1 to Claim; a premise with k
/// strategies adds 1/k to each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Portfolio {
    twelfths: [u64; 5],
    total_sentences: u64,
}

impl Portfolio {
    pub fn weight(&self, c: Category) -> f64 {
        self.twelfths[c.slot()] as f64 / UNIT as f64
    }

    pub fn weights(&self) -> BTreeMap<Category, f64> {
        Category::ALL.into_iter().map(|c| (c, self.weight(c))).collect()
    }

    /// Claims plus premises.
    pub fn total_sentences(&self) -> u64 {
        self.total_sentences
    }

    /// Exact sum of weights, in twelfths; always `12 * total_sentences`.
    pub fn weight_sum_twelfths(&self) -> u64 {
        self.twelfths.iter().sum()
    }

    pub fn ratios(&self) -> RatioVector {
        ratios(self)
    }
}

#[derive(Serialize, Deserialize)]
struct PortfolioWire {
    weights: BTreeMap<Category, f64>,
    total_sentences: u64,
}

impl Serialize for Portfolio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PortfolioWire {
            weights: self.weights(),
            total_sentences: self.total_sentences,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Portfolio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = PortfolioWire::deserialize(d)?;
        let mut twelfths = [0u64; 5];
        for (c, w) in wire.weights {
            let scaled = w * UNIT as f64;
            let rounded = scaled.round();
            if !(rounded >= 0.0) || (scaled - rounded).abs() > 1e-6 {
                return Err(serde::de::Error::custom(format!("weight {w} for {c} is not a multiple of 1/12")));
            }
            twelfths[c.slot()] = rounded as u64;
        }
        let p = Portfolio {
            twelfths,
            total_sentences: wire.total_sentences,
        };
        if p.total_sentences == 0 || p.weight_sum_twelfths() != UNIT * p.total_sentences {
            return Err(serde::de::Error::custom("weights must sum to total_sentences > 0"));
        }
        Ok(p)
    }
}

/// Five shares in category order, summing to 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioVector([f64; 5]);

impl RatioVector {
    /// Accepts entries in [0, 1] summing to 1 within 1e-6.
    pub fn new(values: [f64; 5]) -> Result<Self, PortfolioError> {
        if values.iter().any(|v| !v.is_finite() || *v < -1e-12 || *v > 1.0 + 1e-12) {
            return Err(PortfolioError::InvalidRatios("entries must lie in [0, 1]".into()));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(PortfolioError::InvalidRatios(format!("entries sum to {sum}, not 1")));
        }
        Ok(Self(values))
    }

    pub fn get(&self, c: Category) -> f64 {
        self.0[c.slot()]
    }

    pub fn values(&self) -> [f64; 5] {
        self.0
    }

    pub fn distance(&self, other: &RatioVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl Serialize for RatioVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<Category, f64> = Category::ALL.into_iter().map(|c| (c, self.get(c))).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatioVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = BTreeMap::<Category, f64>::deserialize(d)?;
        let mut v = [0.0; 5];
        for c in Category::ALL {
            v[c.slot()] = *m
                .get(&c)
                .ok_or_else(|| serde::de::Error::custom(format!("missing ratio for {c}")))?;
        }
        RatioVector::new(v).map_err(serde::de::Error::custom)
    }
}

/// One signed bar: `(user - reference) * 100` percentage points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferenceBar {
    pub category: Category,
    pub value: f64,
    pub deficient: bool,
}

/// NonArgument sentences are skipped.
pub fn build_portfolio(annotations: &[SentenceAnnotation]) -> Result<Portfolio, PortfolioError> {
    let mut twelfths = [0u64; 5];
    let mut total = 0;
    for a in annotations {
        match a.component {
            ComponentLabel::NonArgument | ComponentLabel::Claim if !a.strategies.is_empty() => {
                return Err(PortfolioError::StrategiesOnNonPremise {
                    index: a.sentence_index,
                    component: a.component,
                })
            }
            ComponentLabel::NonArgument => {}
            ComponentLabel::Claim => {
                twelfths[Category::Claim.slot()] += UNIT;
                total += 1;
            }
            ComponentLabel::Premise => {
                let k = a.strategies.len() as u64;
                if k == 0 {
                    return Err(PortfolioError::PremiseWithoutStrategy(a.sentence_index));
                }
                for s in &a.strategies {
                    twelfths[Category::from(*s).slot()] += UNIT / k;
                }
                total += 1;
            }
        }
    }
    if total == 0 {
        return Err(PortfolioError::NoArgumentativeSentences);
    }
    Ok(Portfolio {
        twelfths,
        total_sentences: total,
    })
}

pub fn ratios(p: &Portfolio) -> RatioVector {
    let denom = (UNIT * p.total_sentences) as f64;
    RatioVector(p.twelfths.map(|t| t as f64 / denom))
}

/// Unweighted mean of ratio vectors.
pub fn average_ratios(rs: &[RatioVector]) -> Result<RatioVector, PortfolioError> {
    if rs.is_empty() {
        return Err(PortfolioError::EmptyAverage);
    }
    let mut acc = [0.0; 5];
    for r in rs {
        for (a, v) in acc.iter_mut().zip(r.0) {
            *a += v;
        }
    }
    Ok(RatioVector(acc.map(|a| a / rs.len() as f64)))
}

/// Mean of the members' ratio vectors, so each example counts once
/// whatever its length.
pub fn average_portfolio(ps: &[Portfolio]) -> Result<RatioVector, PortfolioError> {
    average_ratios(&ps.iter().map(ratios).collect::<Vec<_>>())
}

/// Bars sorted ascending (most deficient first); equal values keep
/// category order.
pub fn portfolio_difference(user: &RatioVector, reference: &RatioVector) -> Vec<DifferenceBar> {
    let mut bars: Vec<DifferenceBar> = Category::ALL
        .into_iter()
        .map(|c| {
            let value = (user.get(c) - reference.get(c)) * 100.0;
            DifferenceBar {
                category: c,
                value,
                deficient: value < 0.0,
            }
        })
        .collect();
    bars.sort_by(|a, b| a.value.total_cmp(&b.value));
    bars
}

/// Post ids by descending Δ; equal Δ keeps input order.
pub fn rank_examples_by_delta<'a, I>(posts: I) -> Vec<String>
where
    I: IntoIterator<Item = &'a AnnotatedPost>,
{
    let mut v: Vec<&AnnotatedPost> = posts.into_iter().collect();
    v.sort_by(|a, b| b.delta.cmp(&a.delta));
    v.into_iter().map(|p| p.post_id.clone()).collect()
}
