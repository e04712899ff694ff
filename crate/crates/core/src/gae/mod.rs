//! Grammar accuracy evaluation (GAE).
//!
//! Each sentence gets nine binary judgments, one per [`GaeCategory`]:
//! 1 when the sentence shows no flaw of that kind, 0 otherwise. The
//! sentence score is the mean of its nine judgments, a category score is the
//! mean of that category's column over all sentences, and the model score is
//! the mean of the nine category scores. All three are percentages.
//!
//! The model score is also the grand mean of the whole judgment grid, so
//! for a complete single-annotator grid the mean of the sentence scores,
//! the mean of the category scores and the model score coincide.

mod annotation;
mod category;
mod score;
mod session;

use thiserror::Error;

pub use annotation::{read_annotations, write_annotations, AnnotationRecord, GaeAnnotation, Judgments};
pub use category::{GaeCategory, Judgment};
pub use score::{
    category_score, display_pct, model_score, on_granularity, pooled_scores, round2,
    sentence_score, GaeScoreTable, PooledScores, SentenceScore, TableScope, POOLING_RULE,
};
pub use session::{duplicate_ids, GaeSession, SessionItem, UpsertOutcome};

fn list(categories: &[GaeCategory]) -> String {
    categories.iter().map(|c| c.key()).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaeError {
    #[error("annotation is missing categories: {}", list(.0))]
    MissingCategories(Vec<GaeCategory>),
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("judgment for `{category}` must be 0 or 1, got {value}")]
    InvalidJudgment { category: String, value: i64 },
    #[error("`{0}` must not be empty")]
    EmptyId(&'static str),
    #[error("no annotations to score")]
    NoAnnotations,
    #[error("sentence `{0}` is annotated more than once")]
    DuplicateSentence(String),
    #[error("expected one annotator, found `{0}` and `{1}`")]
    MixedAnnotators(String, String),
    #[error("session has no items")]
    NoItems,
    #[error("duplicate sentence ids: {}", .0.join(", "))]
    DuplicateItems(Vec<String>),
    #[error("sentence `{0}` is not part of the session")]
    UnknownSentence(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
