//! Batch analysis of document collections, χ rank distributions and the
//! real-versus-artificial group comparison.

use std::cmp::Ordering;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chi::{analyze, AnalysisConfig, Verdict};
use crate::compress::Backend;
use crate::error::{Error, Result};
use crate::permute::IntermixSchedule;
use crate::text_model::{Document, TextEncoding};

/// Real documents shorter than this are ignored when computing the overlap
/// between groups.
pub const OVERLAP_MIN_SYMBOLS: usize = 5000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub source_id: String,
    /// Absent for skipped documents.
    pub chi: Option<f64>,
    pub symbols: usize,
    pub verdict: Verdict,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Choices the method leaves open, recorded with every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub tokenization: String,
    pub swap_draws: String,
    pub states: String,
    pub document_seed: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            tokenization: "maximal runs of non-whitespace; punctuation and case preserved; \
                           words re-joined with single spaces"
                .into(),
            swap_draws: "n and m drawn independently in 1..=N; n == m is a no-op swap".into(),
            states: "cumulative: state k extends state k-1 along one generator stream".into(),
            document_seed: "base_seed xor document ordinal".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub base_seed: u64,
    pub schedule: IntermixSchedule,
    pub backend: Backend,
    pub backend_description: String,
    pub plateau_start: usize,
    pub threshold: f64,
    pub conventions: Conventions,
}

impl RunConfig {
    pub fn from_analysis(cfg: &AnalysisConfig) -> Self {
        Self {
            base_seed: cfg.seed,
            schedule: cfg.schedule,
            backend: cfg.backend,
            backend_description: cfg.backend.describe(),
            plateau_start: cfg.plateau_start,
            threshold: cfg.threshold,
            conventions: Conventions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    /// Sorted by χ descending (ties by source id); skipped documents last.
    pub entries: Vec<CorpusEntry>,
    /// Share of all documents, skipped ones included, with χ above threshold.
    pub pass_fraction: f64,
    /// Mean length of analyzed documents with χ at or below threshold.
    pub failing_mean_symbols: Option<f64>,
    pub skipped: usize,
    pub threshold: f64,
    pub run_config: RunConfig,
}

impl CorpusReport {
    pub fn passing(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.chi.is_some_and(|c| c > self.threshold))
            .count()
    }

    pub fn recomputed_pass_fraction(&self) -> f64 {
        self.passing() as f64 / self.entries.len() as f64
    }

    /// CSV with columns `rank,source_id,chi,symbols,verdict`. Skipped
    /// documents have empty rank and chi.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["rank", "source_id", "chi", "symbols", "verdict"])
            .map_err(csv_err)?;
        let mut rank = 0;
        for e in &self.entries {
            let (rank_s, chi_s) = match e.chi {
                Some(c) => {
                    rank += 1;
                    (rank.to_string(), c.to_string())
                }
                None => (String::new(), String::new()),
            };
            let verdict = match e.verdict {
                Verdict::CoherentText => "coherent_text",
                Verdict::WordSet => "word_set",
                Verdict::Skipped => "skipped",
            };
            w.write_record([
                rank_s.as_str(),
                &e.source_id,
                &chi_s,
                &e.symbols.to_string(),
                verdict,
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output of UTF-8 fields is UTF-8"))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Analyzes documents with per-document seeds `base_seed ^ ordinal`, the
/// ordinal being the position in `docs`.
pub fn analyze_corpus(docs: &[Document], cfg: &AnalysisConfig) -> Result<CorpusReport> {
    let indexed: Vec<(u64, &Document)> = docs
        .iter()
        .enumerate()
        .map(|(i, d)| (i as u64, d))
        .collect();
    analyze_indexed(&indexed, cfg)
}

/// Like [`analyze_corpus`] with explicit ordinals. A document's χ depends
/// only on its content, its ordinal and the configuration.
pub fn analyze_indexed(docs: &[(u64, &Document)], cfg: &AnalysisConfig) -> Result<CorpusReport> {
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    cfg.validate()?;
    let mut entries = docs
        .par_iter()
        .map(|&(ordinal, doc)| analyze_entry(doc, cfg.seed ^ ordinal, cfg))
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(entry_order);

    let threshold = cfg.threshold;
    let failing: Vec<usize> = entries
        .iter()
        .filter(|e| e.chi.is_some_and(|c| c <= threshold))
        .map(|e| e.symbols)
        .collect();
    let failing_mean_symbols =
        (!failing.is_empty()).then(|| failing.iter().sum::<usize>() as f64 / failing.len() as f64);
    let mut report = CorpusReport {
        skipped: entries.iter().filter(|e| e.chi.is_none()).count(),
        entries,
        pass_fraction: 0.0,
        failing_mean_symbols,
        threshold,
        run_config: RunConfig::from_analysis(cfg),
    };
    report.pass_fraction = report.recomputed_pass_fraction();
    Ok(report)
}

fn analyze_entry(doc: &Document, seed: u64, cfg: &AnalysisConfig) -> Result<CorpusEntry> {
    let symbols = doc.symbol_count();
    match analyze(doc, &cfg.with_seed(seed)) {
        Ok(a) => Ok(CorpusEntry {
            source_id: doc.source_id.clone(),
            chi: Some(a.report.chi),
            symbols,
            verdict: a.report.verdict,
            seed,
            note: None,
        }),
        Err(e @ (Error::TooFewWords(_) | Error::EmptyDocument(_))) => Ok(CorpusEntry {
            source_id: doc.source_id.clone(),
            chi: None,
            symbols,
            verdict: Verdict::Skipped,
            seed,
            note: Some(e.to_string()),
        }),
        Err(e) => Err(e),
    }
}

fn entry_order(a: &CorpusEntry, b: &CorpusEntry) -> Ordering {
    match (a.chi, b.chi) {
        (Some(x), Some(y)) => y.total_cmp(&x),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
    .then_with(|| a.source_id.cmp(&b.source_id))
    .then_with(|| a.seed.cmp(&b.seed))
}

/// `(rank, chi)` over analyzed documents, rank 1 being the largest χ.
pub fn rank_distribution(report: &CorpusReport) -> Vec<(usize, f64)> {
    report
        .entries
        .iter()
        .filter_map(|e| e.chi)
        .enumerate()
        .map(|(i, c)| (i + 1, c))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl GroupSummary {
    fn of(report: &CorpusReport) -> Result<Self> {
        let chis: Vec<f64> = report.entries.iter().filter_map(|e| e.chi).collect();
        if chis.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(Self {
            count: chis.len(),
            min: chis.iter().copied().fold(f64::INFINITY, f64::min),
            mean: chis.iter().sum::<f64>() / chis.len() as f64,
            max: chis.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupComparison {
    pub real: GroupSummary,
    pub artificial: GroupSummary,
    /// Smallest χ among real documents of at least `overlap_min_symbols`.
    pub real_long_min_chi: Option<f64>,
    pub overlap_min_symbols: usize,
    /// Artificial documents with χ at or above `real_long_min_chi`.
    pub overlap: usize,
}

pub fn compare_groups(real: &CorpusReport, artificial: &CorpusReport) -> Result<GroupComparison> {
    let real_summary = GroupSummary::of(real)?;
    let artificial_summary = GroupSummary::of(artificial)?;
    let real_long_min_chi = real
        .entries
        .iter()
        .filter(|e| e.symbols >= OVERLAP_MIN_SYMBOLS)
        .filter_map(|e| e.chi)
        .reduce(f64::min);
    let overlap = match real_long_min_chi {
        Some(floor) => artificial
            .entries
            .iter()
            .filter(|e| e.chi.is_some_and(|c| c >= floor))
            .count(),
        None => 0,
    };
    Ok(GroupComparison {
        real: real_summary,
        artificial: artificial_summary,
        real_long_min_chi,
        overlap_min_symbols: OVERLAP_MIN_SYMBOLS,
        overlap,
    })
}

/// Loads every regular file in `dir` whose name matches `pattern`, sorted by
/// file name so ordinals are stable across runs.
pub fn load_dir(
    dir: impl AsRef<Path>,
    pattern: &str,
    encoding: TextEncoding,
) -> Result<Vec<Document>> {
    let pattern = glob::Pattern::new(pattern)
        .map_err(|e| Error::InvalidParameter(format!("bad glob {pattern:?}: {e}")))?;
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        if !entry.file_type()?.is_file() {
            continue;
        }
        if pattern.matches(&entry.file_name().to_string_lossy()) {
            paths.push(entry.path());
        }
    }
    paths.sort();
    paths.iter().map(|p| Document::load(p, encoding)).collect()
}
