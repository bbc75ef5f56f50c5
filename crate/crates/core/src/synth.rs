//! Deterministic template corpus used for training demos and tests.
//!
//! Each post has one or two claims, a handful of premises and sometimes a
//! non-argumentative aside. Premise templates carry distinct lexical cues
//! per strategy, so models trained on it should separate the classes well.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{
    segment_sentences, AnnotatedPost, Corpus, SentenceAnnotation, StrategyLabel, SupportEdge,
};
use crate::seed::{derive_seed, rng};

/// Topics and the noun phrase used for each in templates.
pub const TOPICS: [(&str, &str); 8] = [
    ("abortion", "abortion"),
    ("dating", "online dating"),
    ("eugenics", "eugenics"),
    ("immortality", "living forever"),
    ("marriage", "marriage"),
    ("parenthood", "having children"),
    ("pride", "pride parades"),
    ("suicide", "assisted suicide"),
];

const CLAIMS: &[&str] = &[
    "I think {t} should be a personal choice.",
    "I believe {t} must be judged more kindly.",
    "In my view {t} should not be forced on anyone.",
    "Nobody should be shamed for their stance on {t}.",
    "I strongly believe the case against {t} is weak.",
    "We should stop treating {t} as a simple moral question.",
];

const LOGOS: &[&str] = &[
    "If {t} were banned outright, people would simply find riskier ways around the rule.",
    "Because every family has different needs, a single rule would fail most of them.",
    "Therefore the burden of proof should fall on whoever wants to restrict {t}.",
    "If the goal is fewer bad outcomes, then better support would work better than punishment.",
    "Since the costs fall on individuals, they would reasonably want the final say.",
    "It follows that a policy on {t} could only work if it allowed exceptions.",
    "Logically, any rule that ignores consent would undermine itself.",
];

const PATHOS: &[&str] = &[
    "It breaks my heart to imagine someone feeling trapped and alone.",
    "Think of the pain of a person who is scared and has nobody to turn to.",
    "I feel angry when people dismiss such suffering with a shrug.",
    "Imagine the fear and heartbreak of being judged for the hardest decision of your life.",
    "It is heartbreaking to see love turn into guilt and shame.",
];

const ETHOS: &[&str] = &[
    "As a nurse with twenty years of experience, I have counselled many people facing this.",
    "In my professional experience as a counsellor, these decisions are never taken lightly.",
    "I have worked as a social worker for a decade, so I know how complicated this gets.",
    "As a family doctor, I have seen this question from both sides many times.",
];

const EVIDENCE: &[&str] = &[
    "Last year my cousin went through exactly this and it changed her whole life.",
    "Two years ago I saw a friend lose her job over a decision about {t}.",
    "My neighbour spent three months waiting for help that never came.",
    "When I was in college, my roommate faced the same choice and nobody supported him.",
    "A few years ago my sister told me how lonely that period was for her.",
];

const LOGOS_EVIDENCE: &[&str] = &[
    "My brother waited a year for help, so a simpler process would have saved him months.",
    "Last spring my aunt was refused support, which shows the rules would fail real people.",
];

const PATHOS_EVIDENCE: &[&str] = &[
    "Last winter I watched my best friend cry for hours, and my heart still hurts for her.",
];

const NON_ARGUMENTS: &[&str] = &[
    "Thanks for posting this.",
    "Edit: fixed a typo.",
    "Interesting question.",
    "Hello everyone.",
    "Sorry for the long post.",
];

#[derive(Clone, Copy)]
enum Kind {
    Logos,
    Pathos,
    Ethos,
    Evidence,
    LogosEvidence,
    PathosEvidence,
}

impl Kind {
    fn templates(self) -> &'static [&'static str] {
        match self {
            Kind::Logos => LOGOS,
            Kind::Pathos => PATHOS,
            Kind::Ethos => ETHOS,
            Kind::Evidence => EVIDENCE,
            Kind::LogosEvidence => LOGOS_EVIDENCE,
            Kind::PathosEvidence => PATHOS_EVIDENCE,
        }
    }

    fn labels(self) -> Vec<StrategyLabel> {
        use StrategyLabel::*;
        match self {
            Kind::Logos => vec![Logos],
            Kind::Pathos => vec![Pathos],
            Kind::Ethos => vec![Ethos],
            Kind::Evidence => vec![Evidence],
            Kind::LogosEvidence => vec![Logos, Evidence],
            Kind::PathosEvidence => vec![Pathos, Evidence],
        }
    }
}

fn pick_kind(r: &mut ChaCha8Rng) -> Kind {
    // Roughly the label balance of a real forum corpus: logos and evidence
    // dominate, ethos is rare.
    match r.gen_range(0..100) {
        0..=37 => Kind::Logos,
        38..=71 => Kind::Evidence,
        72..=83 => Kind::Pathos,
        84..=89 => Kind::Ethos,
        90..=96 => Kind::LogosEvidence,
        _ => Kind::PathosEvidence,
    }
}

fn fill(template: &str, noun: &str) -> String {
    template.replace("{t}", noun)
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn generate_post(topic: &str, noun: &str, ordinal: usize, r: &mut ChaCha8Rng) -> AnnotatedPost {
    let mut texts = Vec::new();
    let mut annotations = Vec::new();
    let mut edges = Vec::new();
    let mut used = std::collections::BTreeSet::new();
    let mut unique = |r: &mut ChaCha8Rng, pool: &'static [&'static str]| -> String {
        for _ in 0..8 {
            let t = *pool.choose(r).expect("non-empty pool");
            if used.insert(t) {
                return capitalize(&fill(t, noun));
            }
        }
        capitalize(&fill(pool.choose(r).expect("non-empty pool"), noun))
    };

    if r.gen_bool(0.25) {
        annotations.push(SentenceAnnotation::non_argument(texts.len()));
        texts.push(unique(r, NON_ARGUMENTS));
    }
    let n_claims = if r.gen_bool(0.3) { 2 } else { 1 };
    let mut claim_at = Vec::new();
    for c in 0..n_claims {
        claim_at.push(texts.len());
        annotations.push(SentenceAnnotation::claim(texts.len()));
        texts.push(unique(r, CLAIMS));
        let n_premises = r.gen_range(2..=4);
        for _ in 0..n_premises {
            let kind = pick_kind(r);
            let i = texts.len();
            annotations.push(SentenceAnnotation::premise(i, kind.labels()));
            texts.push(unique(r, kind.templates()));
            // Most premises back the claim they follow; a few stand alone.
            if r.gen_bool(0.85) {
                edges.push(SupportEdge::support(i, claim_at[c]));
            }
        }
    }
    if r.gen_bool(0.15) {
        annotations.push(SentenceAnnotation::non_argument(texts.len()));
        texts.push(unique(r, NON_ARGUMENTS));
    }

    let body = texts.join(" ");
    let sentences = segment_sentences(&body);
    assert_eq!(sentences.len(), texts.len(), "template split unexpectedly: {body}");
    AnnotatedPost {
        post_id: format!("{topic}-{ordinal:03}"),
        topic: topic.to_string(),
        body,
        delta: r.gen_range(0..=25),
        sentences,
        annotations,
        edges,
        extra: Default::default(),
    }
}

/// `posts_per_topic` posts for each of [`TOPICS`], fully determined by
/// `seed`.
pub fn generate_corpus(posts_per_topic: usize, seed: u64) -> Corpus {
    let mut posts = Vec::new();
    for (t, (topic, noun)) in TOPICS.iter().enumerate() {
        let mut r = rng(derive_seed(seed, t as u64));
        for i in 0..posts_per_topic {
            posts.push(generate_post(topic, noun, i, &mut r));
        }
    }
    Corpus::new(posts)
}

/// Parameters of the bundled `fixtures/train.jsonl`.
pub const BUNDLED_POSTS_PER_TOPIC: usize = 12;
pub const BUNDLED_SEED: u64 = 42;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{corpus_stats, validate_corpus};

    #[test]
    fn generated_corpus_validates() {
        let c = generate_corpus(6, 1);
        let report = validate_corpus(&c);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert_eq!(c.topics().len(), 8);
    }

    #[test]
    fn deterministic() {
        assert_eq!(generate_corpus(3, 5), generate_corpus(3, 5));
        assert_ne!(generate_corpus(3, 5), generate_corpus(3, 6));
    }

    #[test]
    fn every_class_well_represented() {
        let s = corpus_stats(&generate_corpus(BUNDLED_POSTS_PER_TOPIC, BUNDLED_SEED));
        assert!(s.non_arguments >= 10, "{s:?}");
        assert!(s.claims >= 50);
        assert!(s.ethos >= 10 && s.pathos >= 10);
        assert!(s.logos > s.pathos && s.evidence > s.ethos);
    }
}
