use std::collections::HashMap;

use super::{BleuError, TokenizedSentence};

/// Counts of every contiguous n-token window of one sentence. Keys borrow
/// from the sentence's token buffer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramMultiset<'a> {
    order: usize,
    counts: HashMap<&'a [String], usize>,
}

impl<'a> NGramMultiset<'a> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn count(&self, ngram: &[String]) -> usize {
        self.counts.get(ngram).copied().unwrap_or(0)
    }

    /// Sum of all counts, i.e. the number of windows.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Number of distinct n-grams.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'a [String], usize)> + '_ {
        self.counts.iter().map(|(k, v)| (*k, *v))
    }
}

pub fn ngram_multiset(sentence: &TokenizedSentence, n: usize) -> Result<NGramMultiset<'_>, BleuError> {
    if n < 1 {
        return Err(BleuError::InvalidOrder(n));
    }
    let mut counts = HashMap::new();
    for window in sentence.tokens().windows(n) {
        *counts.entry(window).or_insert(0) += 1;
    }
    Ok(NGramMultiset { order: n, counts })
}

/// Σ over candidate n-grams of min(candidate count, max reference count).
pub fn clipped_matches(
    candidate: &NGramMultiset<'_>,
    references: &[NGramMultiset<'_>],
) -> Result<usize, BleuError> {
    if let Some(r) = references.iter().find(|r| r.order != candidate.order) {
        return Err(BleuError::MixedOrders {
            expected: candidate.order,
            found: r.order,
        });
    }
    Ok(candidate
        .iter()
        .map(|(gram, count)| {
            let max_ref = references.iter().map(|r| r.count(gram)).max().unwrap_or(0);
            count.min(max_ref)
        })
        .sum())
}
