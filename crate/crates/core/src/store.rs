//! Event-sourced storage for annotation sessions.
//!
//! Every state change is one JSON line appended to `events.jsonl` before it
//! is applied in memory; opening a store replays the log. Annotation events
//! embed the annotation in the same line format used for export. Sequence
//! numbers start at 1 and are dense.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gae::{
    pooled_scores, sentence_score, GaeAnnotation, GaeError, GaeSession, PooledScores, SessionItem,
    UpsertOutcome,
};

pub const LOG_FILE: &str = "events.jsonl";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("event log line {line}: {message}")]
    Corrupt { line: usize, message: String },
    #[error("event log sequence gap: expected {expected}, found {found}")]
    SequenceGap { expected: u64, found: u64 },
    #[error("session `{0}` not found")]
    UnknownSession(String),
    #[error("session `{0}` already exists")]
    DuplicateSession(String),
    #[error(transparent)]
    Gae(#[from] GaeError),
}

impl StoreError {
    /// True for errors caused by the caller's input rather than the store.
    pub fn is_validation(&self) -> bool {
        matches!(self, StoreError::Gae(e) if !matches!(e, GaeError::UnknownSentence(_)))
            || matches!(self, StoreError::DuplicateSession(_))
    }

    pub fn is_not_found(&self) -> bool {
        matches!(
            self,
            StoreError::UnknownSession(_) | StoreError::Gae(GaeError::UnknownSentence(_))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventPayload {
    SessionCreated {
        session_id: String,
        model_label: String,
        items: Vec<SessionItem>,
    },
    AnnotationSubmitted {
        session_id: String,
        annotation: GaeAnnotation,
    },
    AnnotationReplaced {
        session_id: String,
        annotation: GaeAnnotation,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationEvent {
    pub seq: u64,
    pub wall_time: DateTime<Utc>,
    #[serde(flatten)]
    pub payload: EventPayload,
}

/// Response of [`AnnotationStore::next_item`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NextItem {
    Item {
        /// 0-based position in session order.
        position: usize,
        completed: usize,
        total: usize,
        item: SessionItem,
    },
    Done { completed: usize, total: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ack {
    pub sentence_id: String,
    pub annotator_id: String,
    pub sentence_score: f64,
    pub outcome: UpsertOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Completion {
    pub annotated_sentences: usize,
    pub total: usize,
    pub per_annotator: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionInfo {
    pub session_id: String,
    pub model_label: String,
    pub completion: Completion,
    pub annotations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionScores {
    pub session_id: String,
    pub model_label: String,
    pub completion: Completion,
    pub partial: bool,
    #[serde(flatten)]
    pub scores: PooledScores,
}

struct LogWriter {
    path: PathBuf,
    file: File,
}

impl LogWriter {
    fn append(&mut self, event: &AnnotationEvent) -> Result<(), StoreError> {
        let mut line = serde_json::to_vec(event).expect("events serialize");
        line.push(b'\n');
        let io_err = |source| StoreError::Io {
            path: self.path.clone(),
            source,
        };
        self.file.write_all(&line).map_err(io_err)?;
        self.file.sync_data().map_err(io_err)
    }
}

/// Sessions plus the log that produced them. Callers serialize mutations
/// (one writer); reads borrow a consistent snapshot.
pub struct AnnotationStore {
    sessions: BTreeMap<String, GaeSession>,
    last_seq: u64,
    log: Option<LogWriter>,
}

impl std::fmt::Debug for AnnotationStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnnotationStore")
            .field("sessions", &self.sessions.len())
            .field("last_seq", &self.last_seq)
            .field("log", &self.log.as_ref().map(|l| &l.path))
            .finish()
    }
}

impl AnnotationStore {
    /// A store without persistence.
    pub fn in_memory() -> Self {
        AnnotationStore {
            sessions: BTreeMap::new(),
            last_seq: 0,
            log: None,
        }
    }

    /// Opens (or creates) the store in `dir`, replaying its event log. An
    /// unterminated final line, left by a crash mid-write, is truncated away.
    pub fn open(dir: &Path) -> Result<Self, StoreError> {
        let io_err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| StoreError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let path = dir.join(LOG_FILE);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(io_err(&path)(e)),
        };

        let mut store = AnnotationStore::in_memory();
        let good_len = store.replay_bytes(&bytes)?;
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_err(&path))?;
        if good_len < bytes.len() {
            log::warn!(
                "{}: dropping {} byte(s) of incomplete trailing event",
                path.display(),
                bytes.len() - good_len
            );
            file.set_len(good_len as u64).map_err(io_err(&path))?;
        }
        store.log = Some(LogWriter { path, file });
        Ok(store)
    }

    /// Applies every complete line; returns the byte length of the prefix
    /// to keep. An unterminated last line is discarded.
    fn replay_bytes(&mut self, bytes: &[u8]) -> Result<usize, StoreError> {
        let mut offset = 0;
        let mut line_no = 0;
        while offset < bytes.len() {
            line_no += 1;
            let (line, next, terminated) = match bytes[offset..].iter().position(|b| *b == b'\n') {
                Some(i) => (&bytes[offset..offset + i], offset + i + 1, true),
                None => (&bytes[offset..], bytes.len(), false),
            };
            if line.iter().all(u8::is_ascii_whitespace) {
                offset = next;
                continue;
            }
            if !terminated {
                // never acknowledged: the newline is written before sync
                return Ok(offset);
            }
            let event = serde_json::from_slice(line).map_err(|e| StoreError::Corrupt {
                line: line_no,
                message: e.to_string(),
            })?;
            self.apply(event, line_no)?;
            offset = next;
        }
        Ok(offset)
    }

    /// Rebuilds state from a sequence of events.
    pub fn replay<I: IntoIterator<Item = AnnotationEvent>>(events: I) -> Result<Self, StoreError> {
        let mut store = AnnotationStore::in_memory();
        for (i, e) in events.into_iter().enumerate() {
            store.apply(e, i + 1)?;
        }
        Ok(store)
    }

    fn apply(&mut self, event: AnnotationEvent, line: usize) -> Result<(), StoreError> {
        let expected = self.last_seq + 1;
        if event.seq != expected {
            return Err(StoreError::SequenceGap {
                expected,
                found: event.seq,
            });
        }
        let corrupt = |e: StoreError| StoreError::Corrupt {
            line,
            message: e.to_string(),
        };
        match event.payload {
            EventPayload::SessionCreated {
                session_id,
                model_label,
                items,
            } => {
                if self.sessions.contains_key(&session_id) {
                    return Err(corrupt(StoreError::DuplicateSession(session_id)));
                }
                let session = GaeSession::new(session_id.clone(), model_label, items)
                    .map_err(|e| corrupt(e.into()))?;
                self.sessions.insert(session_id, session);
            }
            EventPayload::AnnotationSubmitted {
                session_id,
                annotation,
            }
            | EventPayload::AnnotationReplaced {
                session_id,
                annotation,
            } => {
                let session = self
                    .sessions
                    .get_mut(&session_id)
                    .ok_or_else(|| corrupt(StoreError::UnknownSession(session_id.clone())))?;
                session.upsert(annotation).map_err(|e| corrupt(e.into()))?;
            }
        }
        self.last_seq = event.seq;
        Ok(())
    }

    fn record(&mut self, payload: EventPayload) -> Result<(), StoreError> {
        let event = AnnotationEvent {
            seq: self.last_seq + 1,
            wall_time: Utc::now(),
            payload,
        };
        if let Some(log) = &mut self.log {
            log.append(&event)?;
        }
        self.apply(event, 0)
    }

    pub fn last_seq(&self) -> u64 {
        self.last_seq
    }

    pub fn sessions(&self) -> impl Iterator<Item = &GaeSession> {
        self.sessions.values()
    }

    pub fn session(&self, session_id: &str) -> Result<&GaeSession, StoreError> {
        self.sessions
            .get(session_id)
            .ok_or_else(|| StoreError::UnknownSession(session_id.to_string()))
    }

    /// Creates a session under a fresh id.
    pub fn create_session(&mut self, model_label: &str, items: Vec<SessionItem>) -> Result<String, StoreError> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        self.create_session_with_id(&id, model_label, items)?;
        Ok(id)
    }

    pub fn create_session_with_id(
        &mut self,
        session_id: &str,
        model_label: &str,
        items: Vec<SessionItem>,
    ) -> Result<(), StoreError> {
        if self.sessions.contains_key(session_id) {
            return Err(StoreError::DuplicateSession(session_id.to_string()));
        }
        if session_id.trim().is_empty() {
            return Err(GaeError::EmptyId("session_id").into());
        }
        // validate before anything reaches the log
        GaeSession::new(session_id, model_label, items.clone())?;
        self.record(EventPayload::SessionCreated {
            session_id: session_id.to_string(),
            model_label: model_label.to_string(),
            items,
        })
    }

    pub fn next_item(&self, session_id: &str, annotator_id: &str) -> Result<NextItem, StoreError> {
        let session = self.session(session_id)?;
        let completed = session.completed_by(annotator_id);
        let total = session.items().len();
        Ok(match session.next_item(annotator_id) {
            Some((position, item)) => NextItem::Item {
                position,
                completed,
                total,
                item: item.clone(),
            },
            None => NextItem::Done { completed, total },
        })
    }

    /// Upserts by (sentence, annotator). Resubmitting identical judgments
    /// writes nothing.
    pub fn submit(&mut self, session_id: &str, annotation: GaeAnnotation) -> Result<Ack, StoreError> {
        let outcome = self.session(session_id)?.check(&annotation)?;
        let ack = Ack {
            sentence_id: annotation.sentence_id.clone(),
            annotator_id: annotation.annotator_id.clone(),
            sentence_score: sentence_score(&annotation),
            outcome,
        };
        let session_id = session_id.to_string();
        match outcome {
            UpsertOutcome::Inserted => self.record(EventPayload::AnnotationSubmitted {
                session_id,
                annotation,
            })?,
            UpsertOutcome::Replaced => self.record(EventPayload::AnnotationReplaced {
                session_id,
                annotation,
            })?,
            UpsertOutcome::Unchanged => {}
        }
        Ok(ack)
    }

    fn completion(session: &GaeSession) -> Completion {
        Completion {
            annotated_sentences: session.annotated_sentences(),
            total: session.items().len(),
            per_annotator: session
                .annotators()
                .into_iter()
                .map(|a| {
                    let n = session.completed_by(&a);
                    (a, n)
                })
                .collect(),
        }
    }

    pub fn session_info(&self, session_id: &str) -> Result<SessionInfo, StoreError> {
        let s = self.session(session_id)?;
        Ok(SessionInfo {
            session_id: s.session_id().to_string(),
            model_label: s.model_label().to_string(),
            completion: Self::completion(s),
            annotations: s.annotations().len(),
        })
    }

    pub fn session_scores(&self, session_id: &str) -> Result<SessionScores, StoreError> {
        let s = self.session(session_id)?;
        let completion = Self::completion(s);
        Ok(SessionScores {
            session_id: s.session_id().to_string(),
            model_label: s.model_label().to_string(),
            partial: completion.annotated_sentences < completion.total,
            completion,
            scores: pooled_scores(s),
        })
    }

    /// Annotations in export line format.
    pub fn export(&self, session_id: &str) -> Result<String, StoreError> {
        let mut out = Vec::new();
        crate::gae::write_annotations(&mut out, self.session(session_id)?.annotations())
            .expect("write to Vec");
        Ok(String::from_utf8(out).expect("json is utf-8"))
    }
}
