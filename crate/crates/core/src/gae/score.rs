use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GaeAnnotation, GaeCategory, GaeError, GaeSession};

/// Describes how the pooled table is formed; stamped into pooled output.
pub const POOLING_RULE: &str = "unweighted mean of per-annotator category scores";

/// Whose judgments a table summarizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableScope {
    Annotator(String),
    Pooled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceScore {
    pub sentence_id: String,
    pub score: f64,
}

/// Sentence, category and model scores, all percentages in [0, 100] and
/// unrounded. Use [`display_pct`] for presentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaeScoreTable {
    pub scope: TableScope,
    pub sentence_scores: Vec<SentenceScore>,
    pub category_scores: BTreeMap<GaeCategory, f64>,
    pub model_score: f64,
    /// Number of sentences the scores are computed over.
    pub sentence_count: usize,
    /// Size of the session the sentences came from, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_items: Option<usize>,
}

impl GaeScoreTable {
    pub fn category(&self, category: GaeCategory) -> f64 {
        self.category_scores[&category]
    }

    /// Category scores in canonical order.
    pub fn category_values(&self) -> [f64; GaeCategory::COUNT] {
        GaeCategory::ALL.map(|c| self.category(c))
    }

    /// True when computed over a strict subset of the session.
    pub fn is_partial(&self) -> bool {
        self.total_items.is_some_and(|t| self.sentence_count < t)
    }

    pub fn sentence(&self, sentence_id: &str) -> Option<f64> {
        self.sentence_scores
            .iter()
            .find(|s| s.sentence_id == sentence_id)
            .map(|s| s.score)
    }

    /// Mean of the given category scores, in canonical order.
    pub fn model_score_of(category_scores: &[f64; GaeCategory::COUNT]) -> f64 {
        category_scores.iter().sum::<f64>() / GaeCategory::COUNT as f64
    }
}

/// Rounds half up to two decimals.
pub fn round2(x: f64) -> f64 {
    (x * 100.0 + 0.5).floor() / 100.0
}

/// Two-decimal display form, e.g. `85.56`.
pub fn display_pct(x: f64) -> String {
    format!("{:.2}", round2(x))
}

/// True when `value` is an integer multiple of 100/`sentences`, i.e. a
/// category score attainable with that many sentences.
pub fn on_granularity(value: f64, sentences: usize) -> bool {
    if sentences == 0 {
        return false;
    }
    let k = value * sentences as f64 / 100.0;
    (k - k.round()).abs() < 1e-9 && (0.0..=sentences as f64).contains(&k.round())
}

/// 100 × (not-flawed count) / 9.
pub fn sentence_score(annotation: &GaeAnnotation) -> f64 {
    100.0 * annotation.judgments.ones() as f64 / GaeCategory::COUNT as f64
}

/// Percentage of annotations judging `category` not flawed.
pub fn category_score(annotations: &[GaeAnnotation], category: GaeCategory) -> Result<f64, GaeError> {
    if annotations.is_empty() {
        return Err(GaeError::NoAnnotations);
    }
    let ones = annotations
        .iter()
        .filter(|a| a.judgments.get(category).is_ok())
        .count();
    Ok(100.0 * ones as f64 / annotations.len() as f64)
}

/// Full table for one annotator's annotations (one per sentence), in the
/// given order.
pub fn model_score(annotations: &[GaeAnnotation]) -> Result<GaeScoreTable, GaeError> {
    let first = annotations.first().ok_or(GaeError::NoAnnotations)?;
    if let Some(other) = annotations.iter().find(|a| a.annotator_id != first.annotator_id) {
        return Err(GaeError::MixedAnnotators(
            first.annotator_id.clone(),
            other.annotator_id.clone(),
        ));
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = annotations.iter().find(|a| !seen.insert(a.sentence_id.as_str())) {
        return Err(GaeError::DuplicateSentence(dup.sentence_id.clone()));
    }

    let sentence_scores = annotations
        .iter()
        .map(|a| SentenceScore {
            sentence_id: a.sentence_id.clone(),
            score: sentence_score(a),
        })
        .collect();
    let mut category_scores = BTreeMap::new();
    for c in GaeCategory::ALL {
        category_scores.insert(c, category_score(annotations, c)?);
    }
    let values = GaeCategory::ALL.map(|c| category_scores[&c]);
    Ok(GaeScoreTable {
        scope: TableScope::Annotator(first.annotator_id.clone()),
        sentence_scores,
        category_scores,
        model_score: GaeScoreTable::model_score_of(&values),
        sentence_count: annotations.len(),
        total_items: None,
    })
}

/// Per-annotator tables, their pooled combination and inter-annotator
/// agreement for one session snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PooledScores {
    pub per_annotator: Vec<GaeScoreTable>,
    /// Absent when nobody has annotated anything yet.
    pub pooled: Option<GaeScoreTable>,
    /// Raw percent agreement per category over every pair of annotators on
    /// every shared sentence. Absent unless two annotators overlap.
    pub agreement: Option<BTreeMap<GaeCategory, f64>>,
    pub overlapping_sentences: usize,
    pub pooling_rule: String,
}

pub fn pooled_scores(session: &GaeSession) -> PooledScores {
    let total = session.items().len();
    let order: std::collections::HashMap<&str, usize> = session
        .items()
        .iter()
        .enumerate()
        .map(|(i, it)| (it.sentence_id.as_str(), i))
        .collect();

    let mut per_annotator = Vec::new();
    for annotator in session.annotators() {
        let mut own: Vec<GaeAnnotation> = session
            .annotations()
            .iter()
            .filter(|a| a.annotator_id == annotator)
            .cloned()
            .collect();
        own.sort_by_key(|a| order[a.sentence_id.as_str()]);
        if let Ok(mut table) = model_score(&own) {
            table.total_items = Some(total);
            per_annotator.push(table);
        }
    }

    let pooled = pool(&per_annotator, session, total);

    let mut agree = [0usize; GaeCategory::COUNT];
    let mut pairs = 0usize;
    let mut overlapping = 0usize;
    for item in session.items() {
        let on_item: Vec<&GaeAnnotation> = session
            .annotations()
            .iter()
            .filter(|a| a.sentence_id == item.sentence_id)
            .collect();
        if on_item.len() < 2 {
            continue;
        }
        overlapping += 1;
        for (i, a) in on_item.iter().enumerate() {
            for b in &on_item[i + 1..] {
                pairs += 1;
                for c in GaeCategory::ALL {
                    if a.judgments.get(c) == b.judgments.get(c) {
                        agree[c.index()] += 1;
                    }
                }
            }
        }
    }
    let agreement = (pairs > 0).then(|| {
        GaeCategory::ALL
            .into_iter()
            .map(|c| (c, 100.0 * agree[c.index()] as f64 / pairs as f64))
            .collect()
    });

    PooledScores {
        per_annotator,
        pooled,
        agreement,
        overlapping_sentences: overlapping,
        pooling_rule: POOLING_RULE.to_string(),
    }
}

fn pool(tables: &[GaeScoreTable], session: &GaeSession, total: usize) -> Option<GaeScoreTable> {
    if tables.is_empty() {
        return None;
    }
    let k = tables.len() as f64;
    let category_scores: BTreeMap<GaeCategory, f64> = GaeCategory::ALL
        .into_iter()
        .map(|c| (c, tables.iter().map(|t| t.category(c)).sum::<f64>() / k))
        .collect();
    let values = GaeCategory::ALL.map(|c| category_scores[&c]);

    let sentence_scores: Vec<SentenceScore> = session
        .items()
        .iter()
        .filter_map(|item| {
            let scores: Vec<f64> = tables
                .iter()
                .filter_map(|t| t.sentence(&item.sentence_id))
                .collect();
            (!scores.is_empty()).then(|| SentenceScore {
                sentence_id: item.sentence_id.clone(),
                score: scores.iter().sum::<f64>() / scores.len() as f64,
            })
        })
        .collect();

    Some(GaeScoreTable {
        scope: TableScope::Pooled,
        sentence_count: sentence_scores.len(),
        sentence_scores,
        category_scores,
        model_score: GaeScoreTable::model_score_of(&values),
        total_items: Some(total),
    })
}
