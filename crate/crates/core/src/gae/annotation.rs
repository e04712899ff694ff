use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use chrono::{DateTime, Utc};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use super::{GaeCategory, GaeError, Judgment};

/// A complete set of nine judgments, indexed by canonical category order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Judgments([Judgment; GaeCategory::COUNT]);

impl Judgments {
    pub fn all(j: Judgment) -> Self {
        Judgments([j; GaeCategory::COUNT])
    }

    /// Builds from 0/1 values in canonical order.
    pub fn from_bits(bits: [u8; GaeCategory::COUNT]) -> Result<Self, GaeError> {
        let mut out = [Judgment::NotFlawed; GaeCategory::COUNT];
        for (i, (slot, bit)) in out.iter_mut().zip(bits).enumerate() {
            *slot = Judgment::from_value(bit).ok_or(GaeError::InvalidJudgment {
                category: GaeCategory::ALL[i].key().to_string(),
                value: bit as i64,
            })?;
        }
        Ok(Judgments(out))
    }

    /// All categories not flawed except the listed ones.
    pub fn with_flaws(flawed: &[GaeCategory]) -> Self {
        let mut j = Judgments::all(Judgment::NotFlawed);
        for c in flawed {
            j.set(*c, Judgment::Flawed);
        }
        j
    }

    pub fn get(&self, category: GaeCategory) -> Judgment {
        self.0[category.index()]
    }

    pub fn set(&mut self, category: GaeCategory, judgment: Judgment) {
        self.0[category.index()] = judgment;
    }

    /// Number of not-flawed categories.
    pub fn ones(&self) -> usize {
        self.0.iter().filter(|j| j.is_ok()).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (GaeCategory, Judgment)> + '_ {
        GaeCategory::ALL.into_iter().zip(self.0.iter().copied())
    }

    /// Validates a raw key → value map: every category present, values 0/1,
    /// no unknown keys.
    pub fn from_map(raw: &BTreeMap<String, i64>) -> Result<Self, GaeError> {
        if let Some(unknown) = raw.keys().find(|k| k.parse::<GaeCategory>().is_err()) {
            return Err(GaeError::UnknownCategory(unknown.clone()));
        }
        let missing: Vec<GaeCategory> = GaeCategory::ALL
            .into_iter()
            .filter(|c| !raw.contains_key(c.key()))
            .collect();
        if !missing.is_empty() {
            return Err(GaeError::MissingCategories(missing));
        }
        let mut out = Judgments::all(Judgment::NotFlawed);
        for c in GaeCategory::ALL {
            let v = raw[c.key()];
            let j = u8::try_from(v)
                .ok()
                .and_then(Judgment::from_value)
                .ok_or_else(|| GaeError::InvalidJudgment {
                    category: c.key().to_string(),
                    value: v,
                })?;
            out.set(c, j);
        }
        Ok(out)
    }
}

impl Serialize for Judgments {
    /// Map in canonical category order.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(GaeCategory::COUNT))?;
        for (c, j) in self.iter() {
            map.serialize_entry(c.key(), &j)?;
        }
        map.end()
    }
}

/// The nine judgments one annotator gave one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AnnotationRecord")]
pub struct GaeAnnotation {
    pub sentence_id: String,
    pub annotator_id: String,
    pub timestamp: DateTime<Utc>,
    pub judgments: Judgments,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

impl GaeAnnotation {
    pub fn new(
        sentence_id: impl Into<String>,
        annotator_id: impl Into<String>,
        judgments: Judgments,
    ) -> Self {
        GaeAnnotation {
            sentence_id: sentence_id.into(),
            annotator_id: annotator_id.into(),
            timestamp: Utc::now(),
            judgments,
            comment: None,
        }
    }

    pub fn at(mut self, timestamp: DateTime<Utc>) -> Self {
        self.timestamp = timestamp;
        self
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comment = Some(comment.into());
        self
    }

    /// Same judgments and comment; ids and timestamp are not compared.
    pub fn same_content(&self, other: &GaeAnnotation) -> bool {
        self.judgments == other.judgments && self.comment == other.comment
    }
}

/// Unvalidated wire form of an annotation line. A missing timestamp is
/// filled with the time of parsing.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotationRecord {
    pub sentence_id: String,
    pub annotator_id: String,
    #[serde(default)]
    pub timestamp: Option<DateTime<Utc>>,
    pub judgments: BTreeMap<String, i64>,
    #[serde(default)]
    pub comment: Option<String>,
}

impl TryFrom<AnnotationRecord> for GaeAnnotation {
    type Error = GaeError;

    fn try_from(r: AnnotationRecord) -> Result<Self, Self::Error> {
        if r.sentence_id.trim().is_empty() {
            return Err(GaeError::EmptyId("sentence_id"));
        }
        if r.annotator_id.trim().is_empty() {
            return Err(GaeError::EmptyId("annotator_id"));
        }
        Ok(GaeAnnotation {
            judgments: Judgments::from_map(&r.judgments)?,
            sentence_id: r.sentence_id,
            annotator_id: r.annotator_id,
            timestamp: r.timestamp.unwrap_or_else(Utc::now),
            comment: r.comment,
        })
    }
}

/// Reads annotation lines; blank lines are skipped.
pub fn read_annotations<R: BufRead>(reader: R) -> Result<Vec<GaeAnnotation>, GaeError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| GaeError::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: AnnotationRecord = serde_json::from_str(&line).map_err(|e| GaeError::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        let annotation = GaeAnnotation::try_from(record).map_err(|e| GaeError::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(annotation);
    }
    Ok(out)
}

pub fn write_annotations<W: Write>(mut writer: W, annotations: &[GaeAnnotation]) -> std::io::Result<()> {
    for a in annotations {
        serde_json::to_writer(&mut writer, a)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
