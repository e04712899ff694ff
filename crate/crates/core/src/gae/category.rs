use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GaeError;

/// The nine grammar categories, in canonical order. The order is part of
/// the wire format (keyboard shortcuts, table rows) and must not change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaeCategory {
    ArticleOrParticle,
    VocabularySelection,
    SingularPlural,
    MisspelledWord,
    MissingWord,
    AddedWord,
    WordOrder,
    Tense,
    SentenceStructure,
}

impl GaeCategory {
    pub const COUNT: usize = 9;

    pub const ALL: [GaeCategory; GaeCategory::COUNT] = [
        GaeCategory::ArticleOrParticle,
        GaeCategory::VocabularySelection,
        GaeCategory::SingularPlural,
        GaeCategory::MisspelledWord,
        GaeCategory::MissingWord,
        GaeCategory::AddedWord,
        GaeCategory::WordOrder,
        GaeCategory::Tense,
        GaeCategory::SentenceStructure,
    ];

    /// Position in canonical order (0-based).
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn key(self) -> &'static str {
        match self {
            GaeCategory::ArticleOrParticle => "article_or_particle",
            GaeCategory::VocabularySelection => "vocabulary_selection",
            GaeCategory::SingularPlural => "singular_plural",
            GaeCategory::MisspelledWord => "misspelled_word",
            GaeCategory::MissingWord => "missing_word",
            GaeCategory::AddedWord => "added_word",
            GaeCategory::WordOrder => "word_order",
            GaeCategory::Tense => "tense",
            GaeCategory::SentenceStructure => "sentence_structure",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GaeCategory::ArticleOrParticle => "Article (en, de) / Particle (ko)",
            GaeCategory::VocabularySelection => "Vocabulary selection",
            GaeCategory::SingularPlural => "Singular / Plural",
            GaeCategory::MisspelledWord => "Misspelled word",
            GaeCategory::MissingWord => "Missing word",
            GaeCategory::AddedWord => "Added word",
            GaeCategory::WordOrder => "Word order",
            GaeCategory::Tense => "Tense",
            GaeCategory::SentenceStructure => "Sentence structure",
        }
    }

    /// What the annotator checks. Mark the category flawed (0) if the check
    /// fails anywhere in the sentence.
    pub fn criterion(self) -> &'static str {
        match self {
            GaeCategory::ArticleOrParticle => {
                "Articles (or Korean postpositional particles) are present where required and grammatically correct."
            }
            GaeCategory::VocabularySelection => {
                "Each word is an appropriate choice both on its own and for the meaning the sentence builds from its words."
            }
            GaeCategory::SingularPlural => {
                "Nouns that are singular or plural in the source keep the same number in the translation."
            }
            GaeCategory::MisspelledWord => "No word has extra, wrong, or dropped letters.",
            GaeCategory::MissingWord => {
                "Nothing expressed in the source is left out of the translation."
            }
            GaeCategory::AddedWord => {
                "The translation adds no expression that is absent from the source."
            }
            GaeCategory::WordOrder => "Words follow the word-order rules of the target language.",
            GaeCategory::Tense => "The translation keeps the tense used in the source.",
            GaeCategory::SentenceStructure => {
                "Source and translation have matching structure at the clause level."
            }
        }
    }

    /// Keyboard shortcut digit (1-9) used by annotation front ends.
    pub fn shortcut(self) -> u8 {
        self.index() as u8 + 1
    }
}

impl fmt::Display for GaeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for GaeCategory {
    type Err = GaeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GaeCategory::ALL
            .into_iter()
            .find(|c| c.key() == s)
            .ok_or_else(|| GaeError::UnknownCategory(s.to_string()))
    }
}

/// One binary judgment. Serialized as the integer 0 (flawed) or 1 (not
/// flawed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Judgment {
    Flawed,
    NotFlawed,
}

impl Judgment {
    pub fn value(self) -> u8 {
        match self {
            Judgment::Flawed => 0,
            Judgment::NotFlawed => 1,
        }
    }

    pub fn from_value(v: u8) -> Option<Judgment> {
        match v {
            0 => Some(Judgment::Flawed),
            1 => Some(Judgment::NotFlawed),
            _ => None,
        }
    }

    pub fn is_ok(self) -> bool {
        self == Judgment::NotFlawed
    }
}

impl From<bool> for Judgment {
    /// `true` means not flawed.
    fn from(not_flawed: bool) -> Self {
        if not_flawed {
            Judgment::NotFlawed
        } else {
            Judgment::Flawed
        }
    }
}

impl Serialize for Judgment {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.value())
    }
}

impl<'de> Deserialize<'de> for Judgment {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = u8::deserialize(deserializer)?;
        Judgment::from_value(v)
            .ok_or_else(|| serde::de::Error::custom(format!("judgment must be 0 or 1, got {v}")))
    }
}
