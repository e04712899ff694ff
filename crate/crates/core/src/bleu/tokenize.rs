use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BleuError;

/// Registered tokenizer modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum TokenizerMode {
    /// Split on unicode whitespace; runs of whitespace collapse.
    #[default]
    #[serde(rename = "whitespace")]
    Whitespace,
    /// Whitespace split, then leading and trailing punctuation characters of
    /// each chunk become tokens of their own.
    #[serde(rename = "punct-split")]
    PunctSplit,
}

impl TokenizerMode {
    pub const ALL: [TokenizerMode; 2] = [TokenizerMode::Whitespace, TokenizerMode::PunctSplit];

    pub fn name(self) -> &'static str {
        match self {
            TokenizerMode::Whitespace => "whitespace",
            TokenizerMode::PunctSplit => "punct-split",
        }
    }
}

impl fmt::Display for TokenizerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TokenizerMode {
    type Err = BleuError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TokenizerMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| BleuError::UnknownTokenizer(s.to_string()))
    }
}

/// A tokenizer mode plus case handling. BLEU is case-sensitive unless
/// `lowercase` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Tokenizer {
    pub mode: TokenizerMode,
    pub lowercase: bool,
}

impl Tokenizer {
    pub fn new(mode: TokenizerMode) -> Self {
        Tokenizer {
            mode,
            lowercase: false,
        }
    }

    pub fn lowercased(mut self, lowercase: bool) -> Self {
        self.lowercase = lowercase;
        self
    }

    pub fn tokenize(&self, text: &str) -> TokenizedSentence {
        let folded;
        let text = if self.lowercase {
            folded = text.to_lowercase();
            folded.as_str()
        } else {
            text
        };
        let mut tokens = Vec::new();
        for chunk in text.split_whitespace() {
            match self.mode {
                TokenizerMode::Whitespace => tokens.push(chunk.to_string()),
                TokenizerMode::PunctSplit => split_punct(chunk, &mut tokens),
            }
        }
        TokenizedSentence {
            tokens,
            tokenizer: *self,
        }
    }
}

impl fmt::Display for Tokenizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lowercase {
            write!(f, "{}+lowercase", self.mode)
        } else {
            write!(f, "{}", self.mode)
        }
    }
}

/// Case-sensitive tokenization in the given mode.
pub fn tokenize(text: &str, mode: TokenizerMode) -> TokenizedSentence {
    Tokenizer::new(mode).tokenize(text)
}

fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '“' | '”'
                | '‘'
                | '’'
                | '«'
                | '»'
                | '„'
                | '…'
                | '–'
                | '—'
                | '¿'
                | '¡'
                | '·'
                | '。'
                | '、'
                | '，'
                | '．'
                | '！'
                | '？'
                | '：'
                | '；'
                | '（'
                | '）'
                | '「'
                | '」'
                | '『'
                | '』'
                | '《'
                | '》'
                | '〈'
                | '〉'
        )
}

fn split_punct(chunk: &str, out: &mut Vec<String>) {
    let chars: Vec<(usize, char)> = chunk.char_indices().collect();
    let lead = chars.iter().take_while(|(_, c)| is_punct(*c)).count();
    if lead == chars.len() {
        out.extend(chars.iter().map(|(_, c)| c.to_string()));
        return;
    }
    let trail = chars.iter().rev().take_while(|(_, c)| is_punct(*c)).count();
    out.extend(chars[..lead].iter().map(|(_, c)| c.to_string()));
    let start = chars[lead].0;
    let end = chars
        .get(chars.len() - trail)
        .map_or(chunk.len(), |(i, _)| *i);
    out.push(chunk[start..end].to_string());
    out.extend(chars[chars.len() - trail..].iter().map(|(_, c)| c.to_string()));
}

/// Ordered, non-empty tokens of one sentence, tagged with the tokenizer that
/// produced them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TokenizedSentence {
    tokens: Vec<String>,
    tokenizer: Tokenizer,
}

impl TokenizedSentence {
    /// Builds a sentence from pre-split tokens. Empty strings are dropped so
    /// the no-empty-token invariant holds.
    pub fn from_tokens<I, S>(tokens: I, tokenizer: Tokenizer) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TokenizedSentence {
            tokens: tokens
                .into_iter()
                .map(Into::into)
                .filter(|t: &String| !t.is_empty())
                .collect(),
            tokenizer,
        }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokenizer(&self) -> Tokenizer {
        self.tokenizer
    }
}
