//! Artificial texts whose word frequencies follow Zipf's law but whose word
//! order is independent and identically distributed.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permute::Prng;
use crate::text_model::{tokenize, Document};

pub const MIN_WORD_LEN: usize = 1;
pub const MAX_WORD_LEN: usize = 12;
pub const DEFAULT_VOCAB_SIZE: usize = 1000;
pub const DEFAULT_EXPONENT: f64 = 1.0;
pub const DEFAULT_TARGET_SYMBOLS: usize = 10_000;

const ALPHABET: &[u8; 26] = b"abcdefghijklmnopqrstuvwxyz";

/// Pseudowords ranked 1..=size with weights proportional to `rank^-exponent`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZipfVocabulary {
    words: Vec<String>,
    weights: Vec<f64>,
    exponent: f64,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl ZipfVocabulary {
    /// Vocabulary from explicit words in rank order.
    pub fn from_words(words: Vec<String>, exponent: f64) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidParameter(
                "vocabulary must not be empty".into(),
            ));
        }
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Zipf exponent must be positive, got {exponent}"
            )));
        }
        let mut seen = HashSet::with_capacity(words.len());
        for w in &words {
            if w.is_empty() || w.chars().any(char::is_whitespace) || !seen.insert(w.as_str()) {
                return Err(Error::InvalidToken(w.clone()));
            }
        }
        let raw: Vec<f64> = (1..=words.len())
            .map(|r| (r as f64).powf(-exponent))
            .collect();
        let norm: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / norm).collect();
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Ok(Self {
            words,
            weights,
            exponent,
            cumulative,
        })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Draws one word by inverse-CDF lookup of a uniform variate.
    pub fn sample(&self, prng: &mut Prng) -> &str {
        let u = prng.next_f64();
        let i = self.cumulative.partition_point(|&c| c <= u);
        &self.words[i.min(self.words.len() - 1)]
    }
}

/// Number of distinct pseudowords of length 1..=12, saturating.
fn pseudoword_space() -> u64 {
    (MIN_WORD_LEN..=MAX_WORD_LEN)
        .map(|l| 26u64.saturating_pow(l as u32))
        .fold(0u64, u64::saturating_add)
}

/// `size` distinct pseudowords: length uniform in 1..=12, letters uniform
/// over a-z, duplicates drawn again. Rank follows generation order.
pub fn build_vocabulary(size: usize, exponent: f64, prng: &mut Prng) -> Result<ZipfVocabulary> {
    if size == 0 {
        return Err(Error::InvalidParameter(
            "vocabulary size must be positive".into(),
        ));
    }
    if size as u64 > pseudoword_space() {
        return Err(Error::InvalidParameter(format!(
            "vocabulary size {size} exceeds the number of distinct pseudowords"
        )));
    }
    let mut seen = HashSet::with_capacity(size);
    let mut words = Vec::with_capacity(size);
    while words.len() < size {
        let len = prng.next_index(MAX_WORD_LEN - MIN_WORD_LEN + 1) + MIN_WORD_LEN - 1;
        let word: String = (0..len)
            .map(|_| ALPHABET[prng.next_index(ALPHABET.len()) - 1] as char)
            .collect();
        if seen.insert(word.clone()) {
            words.push(word);
        }
    }
    ZipfVocabulary::from_words(words, exponent)
}

/// Joins i.i.d. draws with single spaces until the text reaches
/// `target_symbols` characters; the result is at most one word longer.
pub fn generate_text(
    vocab: &ZipfVocabulary,
    target_symbols: usize,
    prng: &mut Prng,
    source_id: impl Into<String>,
) -> Result<Document> {
    if target_symbols == 0 {
        return Err(Error::InvalidParameter(
            "target length must be positive".into(),
        ));
    }
    let mut text = String::with_capacity(target_symbols + MAX_WORD_LEN + 1);
    let mut symbols = 0;
    while symbols < target_symbols {
        if symbols > 0 {
            text.push(' ');
            symbols += 1;
        }
        let w = vocab.sample(prng);
        text.push_str(w);
        symbols += w.chars().count();
    }
    Ok(Document::new(source_id, text))
}

/// One generated document together with the parameters that reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedText {
    pub seed: u64,
    pub vocab_size: usize,
    pub exponent: f64,
    pub target_symbols: usize,
    pub document: Document,
}

/// Builds a fresh vocabulary and a text from one seed.
pub fn generate_from_seed(
    seed: u64,
    vocab_size: usize,
    exponent: f64,
    target_symbols: usize,
    source_id: impl Into<String>,
) -> Result<GeneratedText> {
    let mut prng = Prng::new(seed);
    let vocab = build_vocabulary(vocab_size, exponent, &mut prng)?;
    let document = generate_text(&vocab, target_symbols, &mut prng, source_id)?;
    Ok(GeneratedText {
        seed,
        vocab_size,
        exponent,
        target_symbols,
        document,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFrequency {
    pub rank: usize,
    pub word: String,
    pub frequency: u64,
}

/// Token counts sorted by frequency descending, ties in lexicographic order.
pub fn empirical_rank_frequency(doc: &Document) -> Result<Vec<RankFrequency>> {
    let seq = tokenize(doc)?;
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for w in seq.words() {
        *counts.entry(w.as_str()).or_default() += 1;
    }
    let mut ranked: Vec<(&str, u64)> = counts.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    Ok(ranked
        .into_iter()
        .enumerate()
        .map(|(i, (word, frequency))| RankFrequency {
            rank: i + 1,
            word: word.to_owned(),
            frequency,
        })
        .collect())
}
