//! Machine-translation evaluation toolkit.
//!
//! * [`bleu`] - tokenization, clipped n-gram precision, brevity penalty and
//!   corpus/sentence BLEU with exact integer precision ratios.
//! * [`gae`] - grammar accuracy evaluation: nine binary categories per
//!   sentence, with sentence, category and model scores.
//! * [`corpus`] - parallel corpus loading, seeded splitting and sampling.
//! * [`report`] - best-checkpoint selection and BLEU-vs-GAE comparison reports.
//! * [`store`] - the event-sourced system of record for annotation sessions.
//!
//! With the default `parallel` feature, per-segment work is spread over a
//! rayon pool. Disabling it gives a purely sequential build with identical
//! results.

pub mod bleu;
pub mod corpus;
pub mod exec;
pub mod gae;
pub mod report;
pub mod store;

pub use bleu::{bleu, BleuConfig, BleuResult, Ratio, SegmentPair, Smoothing, TokenizerMode};
pub use exec::Execution;
pub use gae::{GaeAnnotation, GaeCategory, GaeScoreTable, GaeSession, Judgment};
