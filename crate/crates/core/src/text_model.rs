//! Documents, word sequences and the canonical byte form fed to the compressor.
//!
//! Words are maximal runs of non-whitespace characters. Punctuation stays
//! attached to its word and case is preserved, so the per-word byte patterns
//! reach the compressor untouched. The canonical serialization joins words
//! with a single ASCII space; all compressed volumes are measured on that form,
//! including the unshuffled state, never on the raw file.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How raw file bytes are turned into text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TextEncoding {
    /// Strict UTF-8; invalid input is rejected.
    #[default]
    Utf8,
    /// UTF-8 when valid, otherwise ISO-8859-1 (every byte maps to one char).
    Utf8OrLatin1,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub source_id: String,
    pub content: String,
}

impl Document {
    pub fn new(source_id: impl Into<String>, content: impl Into<String>) -> Self {
        Self {
            source_id: source_id.into(),
            content: content.into(),
        }
    }

    /// Reads a document from disk. The source id is the file name.
    pub fn load(path: impl AsRef<Path>, encoding: TextEncoding) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path)?;
        let content = decode(bytes, encoding).map_err(|offset| Error::InvalidEncoding {
            path: path.to_path_buf(),
            offset,
        })?;
        let source_id = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        Ok(Self { source_id, content })
    }

    /// Length in characters (Unicode scalar values).
    pub fn symbol_count(&self) -> usize {
        symbol_count(&self.content)
    }
}

fn decode(bytes: Vec<u8>, encoding: TextEncoding) -> std::result::Result<String, usize> {
    match String::from_utf8(bytes) {
        Ok(s) => Ok(s),
        Err(e) => match encoding {
            TextEncoding::Utf8 => Err(e.utf8_error().valid_up_to()),
            TextEncoding::Utf8OrLatin1 => Ok(e.into_bytes().iter().map(|&b| b as char).collect()),
        },
    }
}

/// Ordered, non-empty list of whitespace-free word tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct WordSequence {
    words: Vec<String>,
}

impl WordSequence {
    pub fn new(words: Vec<String>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::EmptyDocument(String::new()));
        }
        if let Some(bad) = words
            .iter()
            .find(|w| w.is_empty() || w.chars().any(char::is_whitespace))
        {
            return Err(Error::InvalidToken(bad.clone()));
        }
        Ok(Self { words })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn into_words(self) -> Vec<String> {
        self.words
    }

    /// Word count N.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Exchanges the words at 1-based positions `n` and `m` in place.
    pub fn swap(&mut self, n: usize, m: usize) -> Result<()> {
        let len = self.words.len();
        for index in [n, m] {
            if index == 0 || index > len {
                return Err(Error::IndexOutOfRange { index, len });
            }
        }
        self.words.swap(n - 1, m - 1);
        Ok(())
    }

    /// Canonical byte form: words joined by exactly one ASCII space, UTF-8.
    pub fn serialize(&self) -> Vec<u8> {
        let total = self.words.iter().map(String::len).sum::<usize>() + self.words.len() - 1;
        let mut out = Vec::with_capacity(total);
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                out.push(b' ');
            }
            out.extend_from_slice(w.as_bytes());
        }
        out
    }

    /// Sorted copy of the tokens; equal for any two permutations of one sequence.
    pub fn sorted_tokens(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.words.iter().map(String::as_str).collect();
        v.sort_unstable();
        v
    }
}

impl TryFrom<Vec<String>> for WordSequence {
    type Error = Error;

    fn try_from(words: Vec<String>) -> Result<Self> {
        Self::new(words)
    }
}

impl From<WordSequence> for Vec<String> {
    fn from(seq: WordSequence) -> Self {
        seq.words
    }
}

pub fn tokenize(doc: &Document) -> Result<WordSequence> {
    let words: Vec<String> = doc.content.split_whitespace().map(str::to_owned).collect();
    if words.is_empty() {
        return Err(Error::EmptyDocument(doc.source_id.clone()));
    }
    Ok(WordSequence { words })
}

pub fn serialize(seq: &WordSequence) -> Vec<u8> {
    seq.serialize()
}

pub fn symbol_count(text: &str) -> usize {
    text.chars().count()
}

/// Prefix of `text` holding at most `symbols` characters, cut back to the end
/// of the last whole word so no partial token is produced.
pub fn word_prefix(text: &str, symbols: usize) -> &str {
    let cut = text
        .char_indices()
        .nth(symbols)
        .map_or(text.len(), |(i, _)| i);
    let (head, tail) = text.split_at(cut);
    let splits_word = tail.chars().next().is_some_and(|c| !c.is_whitespace())
        && head.chars().next_back().is_some_and(|c| !c.is_whitespace());
    if !splits_word {
        return head;
    }
    match head.char_indices().rev().find(|(_, c)| c.is_whitespace()) {
        Some((i, _)) => &head[..i],
        None => "",
    }
}
