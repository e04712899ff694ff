use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::{GaeAnnotation, GaeError};

/// One sentence offered for annotation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionItem {
    pub sentence_id: String,
    pub source_text: String,
    pub reference_text: String,
    pub candidate_text: String,
}

impl SessionItem {
    pub fn new(
        sentence_id: impl Into<String>,
        source_text: impl Into<String>,
        reference_text: impl Into<String>,
        candidate_text: impl Into<String>,
    ) -> Self {
        SessionItem {
            sentence_id: sentence_id.into(),
            source_text: source_text.into(),
            reference_text: reference_text.into(),
            candidate_text: candidate_text.into(),
        }
    }
}

/// What an upsert did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpsertOutcome {
    Inserted,
    Replaced,
    /// Same judgments and comment as the stored annotation; nothing changed.
    Unchanged,
}

/// A packaged evaluation set and the annotations collected for it. At most
/// one annotation per (sentence, annotator).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaeSession {
    session_id: String,
    model_label: String,
    items: Vec<SessionItem>,
    annotations: Vec<GaeAnnotation>,
}

/// Sentence ids that occur more than once, in first-repeat order.
pub fn duplicate_ids(items: &[SessionItem]) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut dups = Vec::new();
    for it in items {
        if !seen.insert(it.sentence_id.as_str()) && !dups.contains(&it.sentence_id) {
            dups.push(it.sentence_id.clone());
        }
    }
    dups
}

impl GaeSession {
    pub fn new(
        session_id: impl Into<String>,
        model_label: impl Into<String>,
        items: Vec<SessionItem>,
    ) -> Result<Self, GaeError> {
        if items.is_empty() {
            return Err(GaeError::NoItems);
        }
        if items.iter().any(|it| it.sentence_id.trim().is_empty()) {
            return Err(GaeError::EmptyId("sentence_id"));
        }
        let dups = duplicate_ids(&items);
        if !dups.is_empty() {
            return Err(GaeError::DuplicateItems(dups));
        }
        Ok(GaeSession {
            session_id: session_id.into(),
            model_label: model_label.into(),
            items,
            annotations: Vec::new(),
        })
    }

    pub fn session_id(&self) -> &str {
        &self.session_id
    }

    pub fn model_label(&self) -> &str {
        &self.model_label
    }

    pub fn items(&self) -> &[SessionItem] {
        &self.items
    }

    pub fn annotations(&self) -> &[GaeAnnotation] {
        &self.annotations
    }

    pub fn item(&self, sentence_id: &str) -> Option<&SessionItem> {
        self.items.iter().find(|it| it.sentence_id == sentence_id)
    }

    pub fn annotation(&self, sentence_id: &str, annotator_id: &str) -> Option<&GaeAnnotation> {
        self.annotations
            .iter()
            .find(|a| a.sentence_id == sentence_id && a.annotator_id == annotator_id)
    }

    /// Annotator ids with at least one annotation, sorted.
    pub fn annotators(&self) -> BTreeSet<String> {
        self.annotations.iter().map(|a| a.annotator_id.clone()).collect()
    }

    pub fn completed_by(&self, annotator_id: &str) -> usize {
        self.annotations
            .iter()
            .filter(|a| a.annotator_id == annotator_id)
            .count()
    }

    /// Sentences with at least one annotation.
    pub fn annotated_sentences(&self) -> usize {
        self.annotations
            .iter()
            .map(|a| a.sentence_id.as_str())
            .collect::<HashSet<_>>()
            .len()
    }

    /// First item, in session order, the annotator has not annotated.
    pub fn next_item(&self, annotator_id: &str) -> Option<(usize, &SessionItem)> {
        self.items
            .iter()
            .enumerate()
            .find(|(_, it)| self.annotation(&it.sentence_id, annotator_id).is_none())
    }

    /// Checks an annotation could be upserted and reports what it would do.
    pub fn check(&self, annotation: &GaeAnnotation) -> Result<UpsertOutcome, GaeError> {
        if self.item(&annotation.sentence_id).is_none() {
            return Err(GaeError::UnknownSentence(annotation.sentence_id.clone()));
        }
        Ok(
            match self.annotation(&annotation.sentence_id, &annotation.annotator_id) {
                None => UpsertOutcome::Inserted,
                Some(old) if old.same_content(annotation) => UpsertOutcome::Unchanged,
                Some(_) => UpsertOutcome::Replaced,
            },
        )
    }

    /// Inserts or replaces the annotation keyed by (sentence, annotator).
    pub fn upsert(&mut self, annotation: GaeAnnotation) -> Result<UpsertOutcome, GaeError> {
        let outcome = self.check(&annotation)?;
        match outcome {
            UpsertOutcome::Inserted => self.annotations.push(annotation),
            UpsertOutcome::Replaced => {
                let slot = self
                    .annotations
                    .iter_mut()
                    .find(|a| {
                        a.sentence_id == annotation.sentence_id
                            && a.annotator_id == annotation.annotator_id
                    })
                    .expect("checked");
                *slot = annotation;
            }
            UpsertOutcome::Unchanged => {}
        }
        Ok(outcome)
    }
}
