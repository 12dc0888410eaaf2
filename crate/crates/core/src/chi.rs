//! Volume-versus-intermixing curves, the χ ratio and the text/word-set verdict.
//!
//! χ is the mean compressed volume over the saturated part of the curve
//! (states `plateau_start..=K`) divided by the volume of the unshuffled
//! state. Word order that carries repeated patterns makes the shuffled
//! states compress worse, pushing χ above 1.

use serde::{Deserialize, Serialize};

use crate::compress::{Backend, BackendKind};
use crate::error::{Error, Result};
use crate::permute::{for_each_state, IntermixSchedule, Prng};
use crate::text_model::{symbol_count, tokenize, word_prefix, Document};

pub const DEFAULT_PLATEAU_START: usize = 6;
pub const DEFAULT_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeCurve {
    /// Compressed sizes V(0)..=V(K) in bytes.
    pub volumes: Vec<u64>,
    /// Cumulative swap count of each state.
    pub swaps: Vec<u64>,
    pub seed: u64,
    pub backend: BackendKind,
    pub words: usize,
    pub symbols: usize,
}

impl VolumeCurve {
    pub fn max_k(&self) -> usize {
        self.volumes.len() - 1
    }

    /// CSV with columns `k,swaps,bytes`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,swaps,bytes\n");
        for (k, (s, v)) in self.swaps.iter().zip(&self.volumes).enumerate() {
            out.push_str(&format!("{k},{s},{v}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CoherentText,
    WordSet,
    /// Too short to intermix; only produced by corpus runs.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiReport {
    pub chi: f64,
    pub v0: u64,
    pub plateau_mean: f64,
    pub plateau_k_start: usize,
    pub fluctuation_ratio: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    pub symbols: usize,
}

pub fn classify(report: &ChiReport, threshold: f64) -> Verdict {
    verdict_for(report.chi, threshold)
}

fn verdict_for(chi: f64, threshold: f64) -> Verdict {
    if chi > threshold {
        Verdict::CoherentText
    } else {
        Verdict::WordSet
    }
}

impl ChiReport {
    /// Re-evaluates the verdict against another threshold.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self.verdict = verdict_for(self.chi, threshold);
        self
    }
}

/// χ with the default classification threshold.
pub fn chi(curve: &VolumeCurve, plateau_start: usize) -> Result<ChiReport> {
    chi_with_threshold(curve, plateau_start, DEFAULT_THRESHOLD)
}

pub fn chi_with_threshold(
    curve: &VolumeCurve,
    plateau_start: usize,
    threshold: f64,
) -> Result<ChiReport> {
    let v = &curve.volumes;
    if v.is_empty() || plateau_start > curve.max_k() {
        return Err(Error::InvalidParameter(format!(
            "plateau start {plateau_start} beyond last state {}",
            v.len().saturating_sub(1)
        )));
    }
    let v0 = v[0];
    if v0 == 0 {
        return Err(Error::DegenerateCurve);
    }
    let plateau = &v[plateau_start..];
    let plateau_mean = plateau.iter().map(|&x| x as f64).sum::<f64>() / plateau.len() as f64;
    let chi = plateau_mean / v0 as f64;

    let range = |xs: &[u64]| xs.iter().max().unwrap() - xs.iter().min().unwrap();
    let full = range(v);
    let fluctuation_ratio = if full == 0 {
        0.0
    } else {
        range(plateau) as f64 / full as f64
    };

    Ok(ChiReport {
        chi,
        v0,
        plateau_mean,
        plateau_k_start: plateau_start,
        fluctuation_ratio,
        threshold,
        verdict: verdict_for(chi, threshold),
        symbols: curve.symbols,
    })
}

/// Everything that parameterizes one analysis run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub seed: u64,
    pub schedule: IntermixSchedule,
    pub backend: Backend,
    pub plateau_start: usize,
    pub threshold: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            schedule: IntermixSchedule::default(),
            backend: Backend::default(),
            plateau_start: DEFAULT_PLATEAU_START,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

impl AnalysisConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        self.backend.validate()?;
        if self.schedule.divisor == 0 {
            return Err(Error::InvalidParameter(
                "swap divisor must be positive".into(),
            ));
        }
        if self.plateau_start > self.schedule.max_k {
            return Err(Error::InvalidParameter(format!(
                "plateau start {} beyond max k {}",
                self.plateau_start, self.schedule.max_k
            )));
        }
        if !self.threshold.is_finite() {
            return Err(Error::InvalidParameter("threshold must be finite".into()));
        }
        Ok(())
    }
}

pub fn volume_curve(
    doc: &Document,
    schedule: &IntermixSchedule,
    prng: Prng,
    backend: &Backend,
) -> Result<VolumeCurve> {
    backend.validate()?;
    let seq = tokenize(doc)?;
    if seq.len() < 2 {
        return Err(Error::TooFewWords(seq.len()));
    }
    let seed = prng.state();
    let mut prng = prng;
    let mut volumes = Vec::with_capacity(schedule.states());
    let mut swaps = Vec::with_capacity(schedule.states());
    for_each_state(&seq, schedule, &mut prng, |_, count, state| {
        volumes.push(backend.compress(&state.serialize())?.size_bytes);
        swaps.push(count);
        Ok(())
    })?;
    Ok(VolumeCurve {
        volumes,
        swaps,
        seed,
        backend: backend.kind(),
        words: seq.len(),
        symbols: doc.symbol_count(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub curve: VolumeCurve,
    pub report: ChiReport,
}

pub fn analyze(doc: &Document, cfg: &AnalysisConfig) -> Result<Analysis> {
    cfg.validate()?;
    let mut curve = volume_curve(doc, &cfg.schedule, Prng::new(cfg.seed), &cfg.backend)?;
    curve.seed = cfg.seed;
    let report = chi_with_threshold(&curve, cfg.plateau_start, cfg.threshold)?;
    Ok(Analysis { curve, report })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthPoint {
    /// Requested fragment length in symbols.
    pub length: usize,
    /// Symbols actually kept after rounding down to a word boundary.
    pub symbols: usize,
    pub chi: f64,
}

/// χ of growing prefixes of one document, each rounded down to a whole word.
pub fn chi_vs_length(
    doc: &Document,
    lengths: &[usize],
    cfg: &AnalysisConfig,
) -> Result<Vec<LengthPoint>> {
    cfg.validate()?;
    let total = doc.symbol_count();
    if lengths.is_empty() {
        return Err(Error::InvalidParameter("no fragment lengths given".into()));
    }
    if lengths[0] == 0 || lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "fragment lengths must be positive and strictly increasing".into(),
        ));
    }
    if let Some(&length) = lengths.iter().find(|&&l| l > total) {
        return Err(Error::FragmentTooLong {
            length,
            symbols: total,
        });
    }
    lengths
        .iter()
        .map(|&length| {
            let prefix = word_prefix(&doc.content, length);
            let fragment = Document::new(format!("{}[..{length}]", doc.source_id), prefix);
            let words = fragment.content.split_whitespace().count();
            if words < 2 {
                return Err(Error::TooFewWords(words));
            }
            let report = analyze(&fragment, cfg)?.report;
            Ok(LengthPoint {
                length,
                symbols: symbol_count(prefix),
                chi: report.chi,
            })
        })
        .collect()
}
