//! Greedy LZ77 pattern meter and the optional gzip backend.
//!
//! The builtin compressor never produces an archive. It parses the input into
//! literals and back-references and charges a fixed number of bits for each,
//! which makes the compressed volume a pure function of the parse.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompressorConfig {
    pub window_size: usize,
    pub min_match: usize,
    pub max_match: usize,
    pub literal_cost: u64,
    pub match_cost: u64,
}

impl Default for CompressorConfig {
    fn default() -> Self {
        Self {
            window_size: 32_768,
            min_match: 3,
            max_match: 258,
            literal_cost: 9,
            // flag + 15-bit offset + 9-bit length
            match_cost: 25,
        }
    }
}

impl CompressorConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.min_match < 2 {
            return fail(format!("min_match {} < 2", self.min_match));
        }
        if self.max_match < self.min_match {
            return fail(format!(
                "max_match {} < min_match {}",
                self.max_match, self.min_match
            ));
        }
        if self.window_size < self.max_match {
            return fail(format!(
                "window_size {} < max_match {}",
                self.window_size, self.max_match
            ));
        }
        if self.window_size > u32::MAX as usize {
            return fail(format!("window_size {} too large", self.window_size));
        }
        if self.literal_cost == 0 || self.match_cost == 0 {
            return fail("bit costs must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LzToken {
    Literal(u8),
    Match { offset: usize, length: usize },
}

/// Literal and match counts of one parse.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseStats {
    pub literals: u64,
    pub matches: u64,
}

impl ParseStats {
    pub fn bits(&self, cfg: &CompressorConfig) -> u64 {
        self.literals * cfg.literal_cost + self.matches * cfg.match_cost
    }

    pub fn bytes(&self, cfg: &CompressorConfig) -> u64 {
        self.bits(cfg).div_ceil(8)
    }
}

const NIL: u32 = u32::MAX;
const HASH_BITS: u32 = 16;

/// Hash chains over the input: every position whose key bytes hash alike is
/// linked to the previous such position, nearest first.
struct MatchFinder<'a> {
    data: &'a [u8],
    key_len: usize,
    head: Vec<u32>,
    prev: Vec<u32>,
}

impl<'a> MatchFinder<'a> {
    fn new(data: &'a [u8], key_len: usize) -> Self {
        Self {
            data,
            key_len,
            head: vec![NIL; 1 << HASH_BITS],
            prev: vec![NIL; data.len()],
        }
    }

    fn hash(&self, pos: usize) -> usize {
        let d = &self.data[pos..pos + self.key_len];
        let key = d.iter().fold(0u32, |acc, &b| (acc << 8) | b as u32);
        (key.wrapping_mul(0x9E37_79B1) >> (32 - HASH_BITS)) as usize
    }

    fn insert(&mut self, pos: usize) {
        if pos + self.key_len <= self.data.len() {
            let h = self.hash(pos);
            self.prev[pos] = self.head[h];
            self.head[h] = pos as u32;
        }
    }

    /// Longest match for `pos` among earlier positions no more than `window`
    /// bytes back. Ties go to the nearest candidate.
    fn longest(&self, pos: usize, cfg: &CompressorConfig) -> Option<(usize, usize)> {
        let data = self.data;
        let limit = cfg.max_match.min(data.len() - pos);
        if limit < cfg.min_match {
            return None;
        }
        let mut best_len = 0;
        let mut best_off = 0;
        let mut cand = self.head[self.hash(pos)];
        while cand != NIL {
            let c = cand as usize;
            let offset = pos - c;
            if offset > cfg.window_size {
                break;
            }
            // A longer match must also agree at index best_len.
            if data[c + best_len] == data[pos + best_len] {
                let len = data[c..c + limit]
                    .iter()
                    .zip(&data[pos..pos + limit])
                    .take_while(|(a, b)| a == b)
                    .count();
                if len > best_len {
                    best_len = len;
                    best_off = offset;
                    if len == limit {
                        break;
                    }
                }
            }
            cand = self.prev[c];
        }
        (best_len >= cfg.min_match).then_some((best_off, best_len))
    }
}

/// Greedy parse; calls `emit` for each token in order.
fn parse_with<F: FnMut(LzToken)>(data: &[u8], cfg: &CompressorConfig, mut emit: F) -> Result<()> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut finder = MatchFinder::new(data, cfg.min_match.min(3));
    let mut pos = 0;
    while pos < data.len() {
        match finder.longest(pos, cfg) {
            Some((offset, length)) => {
                emit(LzToken::Match { offset, length });
                for p in pos..pos + length {
                    finder.insert(p);
                }
                pos += length;
            }
            None => {
                emit(LzToken::Literal(data[pos]));
                finder.insert(pos);
                pos += 1;
            }
        }
    }
    Ok(())
}

pub fn lz_parse(data: &[u8], cfg: &CompressorConfig) -> Result<Vec<LzToken>> {
    let mut tokens = Vec::new();
    parse_with(data, cfg, |t| tokens.push(t))?;
    Ok(tokens)
}

pub fn parse_stats(data: &[u8], cfg: &CompressorConfig) -> Result<ParseStats> {
    let mut stats = ParseStats::default();
    parse_with(data, cfg, |t| match t {
        LzToken::Literal(_) => stats.literals += 1,
        LzToken::Match { .. } => stats.matches += 1,
    })?;
    Ok(stats)
}

/// Reconstructs the bytes a token list encodes. Overlapping matches copy
/// byte by byte, as in LZ77.
pub fn lz_decode(tokens: &[LzToken]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for (i, &t) in tokens.iter().enumerate() {
        match t {
            LzToken::Literal(b) => out.push(b),
            LzToken::Match { offset, length } => {
                if offset == 0 || offset > out.len() {
                    return Err(Error::CorruptTokens(format!(
                        "token {i}: offset {offset} with {} bytes emitted",
                        out.len()
                    )));
                }
                let start = out.len() - offset;
                for j in 0..length {
                    out.push(out[start + j]);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    BuiltinLz,
    GzipStream,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::BuiltinLz => "builtin_lz",
            BackendKind::GzipStream => "gzip_stream",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressedVolume {
    pub size_bytes: u64,
    pub backend: BackendKind,
}

pub fn compressed_size(data: &[u8], cfg: &CompressorConfig) -> Result<CompressedVolume> {
    let stats = parse_stats(data, cfg)?;
    Ok(CompressedVolume {
        size_bytes: stats.bytes(cfg),
        backend: BackendKind::BuiltinLz,
    })
}

pub const DEFAULT_GZIP_LEVEL: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backend {
    Builtin(CompressorConfig),
    Gzip { level: u32 },
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Builtin(CompressorConfig::default())
    }
}

impl Backend {
    pub fn kind(&self) -> BackendKind {
        match self {
            Backend::Builtin(_) => BackendKind::BuiltinLz,
            Backend::Gzip { .. } => BackendKind::GzipStream,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Backend::Builtin(cfg) => cfg.validate(),
            Backend::Gzip { level } if !(1..=9).contains(level) => Err(Error::InvalidConfig(
                format!("gzip level {level} outside 1..=9"),
            )),
            Backend::Gzip { .. } => gzip::ensure_available(),
        }
    }

    /// Identification string recorded in reports.
    pub fn describe(&self) -> String {
        match self {
            Backend::Builtin(c) => format!(
                "builtin greedy LZ77 (window {}, match {}..={}, literal {} bits, match {} bits)",
                c.window_size, c.min_match, c.max_match, c.literal_cost, c.match_cost
            ),
            Backend::Gzip { level } => format!("{} level {level}", gzip::ENCODER_ID),
        }
    }

    pub fn compress(&self, data: &[u8]) -> Result<CompressedVolume> {
        compress_via_backend(data, self)
    }
}

pub fn compress_via_backend(data: &[u8], backend: &Backend) -> Result<CompressedVolume> {
    match backend {
        Backend::Builtin(cfg) => compressed_size(data, cfg),
        Backend::Gzip { level } => {
            backend.validate()?;
            if data.is_empty() {
                return Err(Error::EmptyInput);
            }
            Ok(CompressedVolume {
                size_bytes: gzip::member_size(data, *level)?,
                backend: BackendKind::GzipStream,
            })
        }
    }
}

#[cfg(feature = "gzip")]
mod gzip {
    use std::io::Write;

    use flate2::{Compression, GzBuilder};

    use crate::error::Result;

    pub const ENCODER_ID: &str = "gzip member via flate2/miniz_oxide (RFC 1952, mtime 0, no name)";

    pub fn ensure_available() -> Result<()> {
        Ok(())
    }

    pub fn member_size(data: &[u8], level: u32) -> Result<u64> {
        let mut enc = GzBuilder::new()
            .mtime(0)
            .write(Vec::with_capacity(data.len() / 2), Compression::new(level));
        enc.write_all(data)?;
        Ok(enc.finish()?.len() as u64)
    }
}

#[cfg(not(feature = "gzip"))]
mod gzip {
    use crate::error::{Error, Result};

    pub const ENCODER_ID: &str = "gzip (not compiled in)";

    pub fn ensure_available() -> Result<()> {
        Err(Error::BackendUnavailable("gzip"))
    }

    pub fn member_size(_: &[u8], _: u32) -> Result<u64> {
        Err(Error::BackendUnavailable("gzip"))
    }
}
