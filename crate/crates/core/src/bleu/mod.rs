//! BLEU: clipped (modified) n-gram precision pooled over a corpus, combined
//! as a weighted geometric mean and scaled by a brevity penalty.
//!
//! Precisions are kept as exact integer ratios so that corpus pooling is
//! associative and order independent; floating point only enters for the
//! brevity penalty and the log/exp combination. Scores are on the 0-100
//! scale.

mod ngram;
mod tokenize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exec::Execution;

pub use ngram::{clipped_matches, ngram_multiset, NGramMultiset};
pub use tokenize::{tokenize, TokenizedSentence, Tokenizer, TokenizerMode};

/// Rule used to pick the reference length when a segment has several
/// references. Stamped into every result.
pub const REFERENCE_LENGTH_RULE: &str = "closest-to-candidate, ties-to-shorter";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BleuError {
    #[error("unknown tokenizer mode `{0}` (expected `whitespace` or `punct-split`)")]
    UnknownTokenizer(String),
    #[error("n-gram order must be at least 1, got {0}")]
    InvalidOrder(usize),
    #[error("n-gram multisets have mixed orders ({expected} and {found})")]
    MixedOrders { expected: usize, found: usize },
    #[error("precision at order {order} is undefined: no candidate has {order} or more tokens")]
    UndefinedPrecision { order: usize },
    #[error("effective reference length must be at least 1, got {0}")]
    InvalidReferenceLength(usize),
    #[error("segment list is empty")]
    NoSegments,
    #[error("segment has no references")]
    NoReferences,
    #[error("segment mixes tokenizers `{expected}` and `{found}`")]
    TokenizerMismatch { expected: Tokenizer, found: Tokenizer },
    #[error("invalid BLEU config: {0}")]
    InvalidConfig(String),
    #[error("candidates have {candidates} lines but reference set {index} has {reference}")]
    LineCountMismatch {
        candidates: usize,
        index: usize,
        reference: usize,
    },
}

/// One candidate and its references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentPair {
    candidate: TokenizedSentence,
    references: Vec<TokenizedSentence>,
}

impl SegmentPair {
    pub fn new(
        candidate: TokenizedSentence,
        references: Vec<TokenizedSentence>,
    ) -> Result<Self, BleuError> {
        if references.is_empty() {
            return Err(BleuError::NoReferences);
        }
        let expected = candidate.tokenizer();
        if let Some(r) = references.iter().find(|r| r.tokenizer() != expected) {
            return Err(BleuError::TokenizerMismatch {
                expected,
                found: r.tokenizer(),
            });
        }
        Ok(SegmentPair {
            candidate,
            references,
        })
    }

    /// Tokenizes a candidate and its references with one tokenizer.
    pub fn from_text<S: AsRef<str>>(
        candidate: &str,
        references: &[S],
        tokenizer: Tokenizer,
    ) -> Result<Self, BleuError> {
        SegmentPair::new(
            tokenizer.tokenize(candidate),
            references.iter().map(|r| tokenizer.tokenize(r.as_ref())).collect(),
        )
    }

    pub fn candidate(&self) -> &TokenizedSentence {
        &self.candidate
    }

    pub fn references(&self) -> &[TokenizedSentence] {
        &self.references
    }

    pub fn tokenizer(&self) -> Tokenizer {
        self.candidate.tokenizer()
    }

    /// Adds another reference; it must use the segment's tokenizer.
    pub fn push_reference(&mut self, reference: TokenizedSentence) -> Result<(), BleuError> {
        if reference.tokenizer() != self.tokenizer() {
            return Err(BleuError::TokenizerMismatch {
                expected: self.tokenizer(),
                found: reference.tokenizer(),
            });
        }
        self.references.push(reference);
        Ok(())
    }
}

/// Zips a candidate file's lines with one or more reference files' lines.
pub fn build_segments<S: AsRef<str>>(
    candidates: &[S],
    reference_sets: &[Vec<S>],
    tokenizer: Tokenizer,
) -> Result<Vec<SegmentPair>, BleuError> {
    if reference_sets.is_empty() {
        return Err(BleuError::NoReferences);
    }
    for (index, set) in reference_sets.iter().enumerate() {
        if set.len() != candidates.len() {
            return Err(BleuError::LineCountMismatch {
                candidates: candidates.len(),
                index,
                reference: set.len(),
            });
        }
    }
    candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let refs: Vec<&str> = reference_sets.iter().map(|set| set[i].as_ref()).collect();
            SegmentPair::from_text(c.as_ref(), &refs, tokenizer)
        })
        .collect()
}

/// Exact, unreduced integer ratio. Serialized as `"num/den"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Ratio {
    pub numerator: u64,
    pub denominator: u64,
}

impl Ratio {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        Ratio {
            numerator,
            denominator,
        }
    }

    /// `None` when the denominator is zero.
    pub fn value(self) -> Option<f64> {
        (self.denominator > 0).then(|| self.numerator as f64 / self.denominator as f64)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl FromStr for Ratio {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = s.split_once('/').ok_or_else(|| format!("`{s}` is not num/den"))?;
        let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("`{s}`: {e}"));
        Ok(Ratio::new(parse(n)?, parse(d)?))
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Smoothing {
    /// Any zero precision with positive weight makes the score 0.
    #[default]
    None,
    /// A zero match count at some order is replaced by `epsilon`
    /// (numerator only). Requires 0 < epsilon ≤ 1 so precisions stay ≤ 1.
    AddEpsilon { epsilon: f64 },
}

impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Smoothing::None => f.write_str("none"),
            Smoothing::AddEpsilon { epsilon } => write!(f, "add-epsilon:{epsilon}"),
        }
    }
}

impl FromStr for Smoothing {
    type Err = BleuError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "none" {
            return Ok(Smoothing::None);
        }
        let eps = s
            .strip_prefix("add-epsilon")
            .map(|rest| rest.strip_prefix(':').unwrap_or(if rest.is_empty() { "0.1" } else { rest }))
            .ok_or_else(|| {
                BleuError::InvalidConfig(format!(
                    "unknown smoothing `{s}` (expected `none` or `add-epsilon[:EPS]`)"
                ))
            })?;
        let epsilon: f64 = eps
            .parse()
            .map_err(|_| BleuError::InvalidConfig(format!("bad epsilon `{eps}`")))?;
        Ok(Smoothing::AddEpsilon { epsilon })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuConfig {
    pub max_n: usize,
    pub weights: Vec<f64>,
    pub smoothing: Smoothing,
}

impl Default for BleuConfig {
    fn default() -> Self {
        BleuConfig::uniform(4)
    }
}

impl BleuConfig {
    /// `max_n` orders with weight 1/max_n each, no smoothing.
    pub fn uniform(max_n: usize) -> Self {
        BleuConfig {
            max_n,
            weights: vec![1.0 / max_n.max(1) as f64; max_n],
            smoothing: Smoothing::None,
        }
    }

    pub fn with_smoothing(mut self, smoothing: Smoothing) -> Self {
        self.smoothing = smoothing;
        self
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = weights;
        self
    }

    pub fn validate(&self) -> Result<(), BleuError> {
        if self.max_n < 1 {
            return Err(BleuError::InvalidConfig("max_n must be at least 1".into()));
        }
        if self.weights.len() != self.max_n {
            return Err(BleuError::InvalidConfig(format!(
                "{} weights given for max_n = {}",
                self.weights.len(),
                self.max_n
            )));
        }
        if self.weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(BleuError::InvalidConfig("weights must be non-negative".into()));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(BleuError::InvalidConfig(format!("weights sum to {sum}, not 1")));
        }
        if let Smoothing::AddEpsilon { epsilon } = self.smoothing {
            if !(epsilon > 0.0 && epsilon <= 1.0) {
                return Err(BleuError::InvalidConfig(format!(
                    "epsilon must be in (0, 1], got {epsilon}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuResult {
    pub score: f64,
    /// One exact ratio per order 1..=max_n.
    pub precisions: Vec<Ratio>,
    pub brevity_penalty: f64,
    pub candidate_length: u64,
    pub effective_reference_length: u64,
    pub max_n: usize,
    pub weights: Vec<f64>,
    pub tokenizer_mode: TokenizerMode,
    pub lowercase: bool,
    pub smoothing: Smoothing,
    pub reference_length_rule: String,
    pub segments: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

/// Sufficient statistics of one or more segments. Merging is associative
/// and commutative, so segments can be reduced in any grouping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentStats {
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
    pub candidate_length: u64,
    pub reference_length: u64,
}

impl SegmentStats {
    pub fn zero(max_n: usize) -> Self {
        SegmentStats {
            matches: vec![0; max_n],
            totals: vec![0; max_n],
            candidate_length: 0,
            reference_length: 0,
        }
    }

    pub fn of(segment: &SegmentPair, max_n: usize) -> Self {
        let mut stats = SegmentStats::zero(max_n);
        let cand = segment.candidate();
        for n in 1..=max_n {
            let cm = ngram_multiset(cand, n).expect("order >= 1");
            if cm.is_empty() {
                continue;
            }
            let refs: Vec<NGramMultiset<'_>> = segment
                .references()
                .iter()
                .map(|r| ngram_multiset(r, n).expect("order >= 1"))
                .collect();
            stats.matches[n - 1] = clipped_matches(&cm, &refs).expect("same order") as u64;
            stats.totals[n - 1] = cm.total() as u64;
        }
        stats.candidate_length = cand.len() as u64;
        stats.reference_length = effective_reference_length(segment) as u64;
        stats
    }

    pub fn merge(mut self, other: SegmentStats) -> Self {
        for (a, b) in self.matches.iter_mut().zip(&other.matches) {
            *a += b;
        }
        for (a, b) in self.totals.iter_mut().zip(&other.totals) {
            *a += b;
        }
        self.candidate_length += other.candidate_length;
        self.reference_length += other.reference_length;
        self
    }

    pub fn precision(&self, n: usize) -> Ratio {
        Ratio::new(self.matches[n - 1], self.totals[n - 1])
    }
}

fn pooled_stats(segments: &[SegmentPair], max_n: usize, exec: Execution) -> SegmentStats {
    exec.map_reduce(
        segments,
        SegmentStats::zero(max_n),
        |s| SegmentStats::of(s, max_n),
        SegmentStats::merge,
    )
}

/// Corpus-pooled clipped precision at order `n`.
pub fn modified_precision(segments: &[SegmentPair], n: usize) -> Result<Ratio, BleuError> {
    if segments.is_empty() {
        return Err(BleuError::NoSegments);
    }
    if n < 1 {
        return Err(BleuError::InvalidOrder(n));
    }
    let mut ratio = Ratio::default();
    for seg in segments {
        let cm = ngram_multiset(seg.candidate(), n)?;
        let refs = seg
            .references()
            .iter()
            .map(|r| ngram_multiset(r, n))
            .collect::<Result<Vec<_>, _>>()?;
        ratio.numerator += clipped_matches(&cm, &refs)? as u64;
        ratio.denominator += cm.total() as u64;
    }
    if ratio.denominator == 0 {
        return Err(BleuError::UndefinedPrecision { order: n });
    }
    Ok(ratio)
}

/// 1 when `c > r`, otherwise `exp(1 - r/c)`. An empty candidate (`c = 0`)
/// gets 0.
pub fn brevity_penalty(c: u64, r: u64) -> Result<f64, BleuError> {
    if r < 1 {
        return Err(BleuError::InvalidReferenceLength(r as usize));
    }
    Ok(if c == 0 {
        0.0
    } else if c > r {
        1.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    })
}

/// Length of the reference closest in length to the candidate; ties go to
/// the shorter reference.
pub fn effective_reference_length(segment: &SegmentPair) -> usize {
    let c = segment.candidate().len();
    segment
        .references()
        .iter()
        .map(TokenizedSentence::len)
        .min_by_key(|&len| (len.abs_diff(c), len))
        .expect("segment has at least one reference")
}

pub fn bleu(segments: &[SegmentPair], config: &BleuConfig) -> Result<BleuResult, BleuError> {
    bleu_with(segments, config, Execution::default())
}

/// BLEU with an explicit execution strategy. Results are identical for
/// both strategies.
pub fn bleu_with(
    segments: &[SegmentPair],
    config: &BleuConfig,
    exec: Execution,
) -> Result<BleuResult, BleuError> {
    config.validate()?;
    let first = segments.first().ok_or(BleuError::NoSegments)?;
    let tokenizer = first.tokenizer();
    if let Some(s) = segments.iter().find(|s| s.tokenizer() != tokenizer) {
        return Err(BleuError::TokenizerMismatch {
            expected: tokenizer,
            found: s.tokenizer(),
        });
    }
    let stats = pooled_stats(segments, config.max_n, exec);
    Ok(score_stats(&stats, config, tokenizer, segments.len()))
}

/// Combines pooled statistics into a result. `config` must be valid.
pub fn score_stats(
    stats: &SegmentStats,
    config: &BleuConfig,
    tokenizer: Tokenizer,
    segments: usize,
) -> BleuResult {
    let mut diagnostics = Vec::new();
    let c = stats.candidate_length;
    let r = stats.reference_length;

    let brevity_penalty = if r == 0 {
        // every reference empty: nothing to be brief against
        diagnostics.push("all references are empty; brevity penalty set to 1".to_string());
        if c == 0 { 0.0 } else { 1.0 }
    } else {
        brevity_penalty(c, r).expect("r >= 1")
    };
    if c == 0 {
        diagnostics.push("candidate corpus is empty; brevity penalty and score set to 0".into());
    }

    let precisions: Vec<Ratio> = (1..=config.max_n).map(|n| stats.precision(n)).collect();
    let mut log_sum = 0.0;
    let mut zero = false;
    for (i, (p, &w)) in precisions.iter().zip(&config.weights).enumerate() {
        let order = i + 1;
        if p.denominator == 0 {
            diagnostics.push(format!(
                "precision at order {order} is undefined (no candidate n-grams); treated as 0"
            ));
        }
        if w == 0.0 {
            continue;
        }
        let value = match (p.numerator, p.denominator, config.smoothing) {
            (_, 0, _) => 0.0,
            (0, d, Smoothing::AddEpsilon { epsilon }) => epsilon / d as f64,
            (m, d, _) => m as f64 / d as f64,
        };
        if value == 0.0 {
            zero = true;
        } else {
            log_sum += w * value.ln();
        }
    }

    let score = if zero || brevity_penalty == 0.0 {
        0.0
    } else {
        (100.0 * brevity_penalty * log_sum.exp()).clamp(0.0, 100.0)
    };

    BleuResult {
        score,
        precisions,
        brevity_penalty,
        candidate_length: c,
        effective_reference_length: r,
        max_n: config.max_n,
        weights: config.weights.clone(),
        tokenizer_mode: tokenizer.mode,
        lowercase: tokenizer.lowercase,
        smoothing: config.smoothing,
        reference_length_rule: REFERENCE_LENGTH_RULE.to_string(),
        segments,
        diagnostics,
    }
}

/// BLEU of a single segment.
pub fn sentence_bleu(segment: &SegmentPair, config: &BleuConfig) -> Result<BleuResult, BleuError> {
    bleu_with(std::slice::from_ref(segment), config, Execution::Sequential)
}

/// Sentence BLEU for every segment, in input order.
pub fn sentence_bleus(
    segments: &[SegmentPair],
    config: &BleuConfig,
    exec: Execution,
) -> Result<Vec<BleuResult>, BleuError> {
    config.validate()?;
    exec.map(segments, |s| sentence_bleu(s, config))
        .into_iter()
        .collect()
}
