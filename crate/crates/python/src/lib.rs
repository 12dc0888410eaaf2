//! Python bindings for textchi.
//!
//! Text goes in as `str`, compressor input as `bytes`. Corpus reports cross
//! the boundary as plain dicts (the JSON report schema), so they can be saved
//! and fed back to `compare_groups`.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyTuple};

use ::textchi::{
    chi::{self, DEFAULT_PLATEAU_START, DEFAULT_THRESHOLD},
    compress::{self, DEFAULT_GZIP_LEVEL},
    corpus, permute, zipf, AnalysisConfig, Backend, CompressorConfig, Document, Error,
    IntermixSchedule, LzToken, WordSequence,
};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn backend(name: &str, gzip_level: u32) -> PyResult<Backend> {
    match name {
        "builtin" | "builtin_lz" => Ok(Backend::Builtin(CompressorConfig::default())),
        "gzip" | "gzip_stream" => Ok(Backend::Gzip { level: gzip_level }),
        other => Err(PyValueError::new_err(format!(
            "unknown backend {other:?}, expected 'builtin' or 'gzip'"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn config(
    seed: u64,
    max_k: usize,
    swap_divisor: u64,
    plateau_start: usize,
    threshold: f64,
    backend_name: &str,
    gzip_level: u32,
) -> PyResult<AnalysisConfig> {
    let cfg = AnalysisConfig {
        seed,
        schedule: IntermixSchedule::new(max_k, swap_divisor).map_err(to_py)?,
        backend: backend(backend_name, gzip_level)?,
        plateau_start,
        threshold,
    };
    cfg.validate().map_err(to_py)?;
    Ok(cfg)
}

fn sequence(words: Vec<String>) -> PyResult<WordSequence> {
    WordSequence::new(words).map_err(to_py)
}

/// Splits text into whitespace-delimited words, punctuation and case kept.
#[pyfunction]
fn tokenize(text: &str) -> PyResult<Vec<String>> {
    ::textchi::tokenize(&Document::new("<python>", text))
        .map(WordSequence::into_words)
        .map_err(to_py)
}

/// Canonical byte form of a word list: words joined by single spaces.
#[pyfunction]
fn serialize<'py>(py: Python<'py>, words: Vec<String>) -> PyResult<Bound<'py, PyBytes>> {
    Ok(PyBytes::new(py, &sequence(words)?.serialize()))
}

#[pyfunction]
fn symbol_count(text: &str) -> usize {
    ::textchi::symbol_count(text)
}

/// 64-bit xorshift* generator shared with the Rust side.
#[pyclass(name = "Prng")]
struct PyPrng {
    inner: ::textchi::Prng,
}

#[pymethods]
impl PyPrng {
    #[new]
    fn new(seed: u64) -> Self {
        Self {
            inner: ::textchi::Prng::new(seed),
        }
    }

    #[getter]
    fn state(&self) -> u64 {
        self.inner.state()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform index in 1..=n.
    fn next_index(&mut self, n: usize) -> PyResult<usize> {
        if n == 0 {
            return Err(PyValueError::new_err("n must be positive"));
        }
        Ok(self.inner.next_index(n))
    }

    fn __repr__(&self) -> String {
        format!("Prng(state={})", self.inner.state())
    }
}

/// Returns a copy of `words` with 1-based positions n and m exchanged.
#[pyfunction]
fn atomic_swap(words: Vec<String>, n: usize, m: usize) -> PyResult<Vec<String>> {
    permute::atomic_swap(&sequence(words)?, n, m)
        .map(WordSequence::into_words)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (words, seed=42, max_k=20, swap_divisor=10))]
fn intermix_states(
    words: Vec<String>,
    seed: u64,
    max_k: usize,
    swap_divisor: u64,
) -> PyResult<Vec<Vec<String>>> {
    let schedule = IntermixSchedule::new(max_k, swap_divisor).map_err(to_py)?;
    let states = permute::intermix_states(
        &sequence(words)?,
        &schedule,
        &mut ::textchi::Prng::new(seed),
    )
    .map_err(to_py)?;
    Ok(states.into_iter().map(WordSequence::into_words).collect())
}

/// Greedy LZ77 parse with default parameters. Tokens are `("lit", byte)` or
/// `("match", offset, length)`.
#[pyfunction]
fn lz_parse<'py>(py: Python<'py>, data: &[u8]) -> PyResult<Vec<Bound<'py, PyTuple>>> {
    let tokens = compress::lz_parse(data, &CompressorConfig::default()).map_err(to_py)?;
    tokens
        .into_iter()
        .map(|t| match t {
            LzToken::Literal(b) => ("lit", b).into_pyobject(py),
            LzToken::Match { offset, length } => ("match", offset, length).into_pyobject(py),
        })
        .collect()
}

#[pyfunction]
fn lz_decode<'py>(
    py: Python<'py>,
    tokens: Vec<Bound<'py, PyTuple>>,
) -> PyResult<Bound<'py, PyBytes>> {
    let parsed = tokens
        .iter()
        .map(|t| {
            let kind: String = t.get_item(0)?.extract()?;
            match kind.as_str() {
                "lit" => Ok(LzToken::Literal(t.get_item(1)?.extract()?)),
                "match" => Ok(LzToken::Match {
                    offset: t.get_item(1)?.extract()?,
                    length: t.get_item(2)?.extract()?,
                }),
                other => Err(PyValueError::new_err(format!(
                    "unknown token kind {other:?}"
                ))),
            }
        })
        .collect::<PyResult<Vec<_>>>()?;
    let bytes = compress::lz_decode(&parsed).map_err(to_py)?;
    Ok(PyBytes::new(py, &bytes))
}

/// Compressed volume in bytes under the chosen backend.
#[pyfunction]
#[pyo3(signature = (data, backend="builtin", gzip_level=DEFAULT_GZIP_LEVEL))]
fn compressed_size(data: &[u8], backend: &str, gzip_level: u32) -> PyResult<u64> {
    let b = self::backend(backend, gzip_level)?;
    compress::compress_via_backend(data, &b)
        .map(|v| v.size_bytes)
        .map_err(to_py)
}

#[pyclass(name = "ChiReport", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyChiReport {
    chi: f64,
    v0: u64,
    plateau_mean: f64,
    plateau_k_start: usize,
    fluctuation_ratio: f64,
    threshold: f64,
    verdict: String,
    symbols: usize,
}

impl From<chi::ChiReport> for PyChiReport {
    fn from(r: chi::ChiReport) -> Self {
        let verdict = match r.verdict {
            chi::Verdict::CoherentText => "coherent_text",
            chi::Verdict::WordSet => "word_set",
            chi::Verdict::Skipped => "skipped",
        };
        Self {
            chi: r.chi,
            v0: r.v0,
            plateau_mean: r.plateau_mean,
            plateau_k_start: r.plateau_k_start,
            fluctuation_ratio: r.fluctuation_ratio,
            threshold: r.threshold,
            verdict: verdict.to_owned(),
            symbols: r.symbols,
        }
    }
}

#[pymethods]
impl PyChiReport {
    fn __repr__(&self) -> String {
        format!(
            "ChiReport(chi={:.4}, fluctuation_ratio={:.3}, verdict='{}')",
            self.chi, self.fluctuation_ratio, self.verdict
        )
    }
}

#[pyclass(name = "VolumeCurve", frozen)]
struct PyVolumeCurve {
    inner: chi::VolumeCurve,
}

#[pymethods]
impl PyVolumeCurve {
    #[getter]
    fn volumes(&self) -> Vec<u64> {
        self.inner.volumes.clone()
    }

    #[getter]
    fn swaps(&self) -> Vec<u64> {
        self.inner.swaps.clone()
    }

    #[getter]
    fn words(&self) -> usize {
        self.inner.words
    }

    #[getter]
    fn symbols(&self) -> usize {
        self.inner.symbols
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[pyo3(signature = (plateau_start=DEFAULT_PLATEAU_START, threshold=DEFAULT_THRESHOLD))]
    fn chi(&self, plateau_start: usize, threshold: f64) -> PyResult<PyChiReport> {
        chi::chi_with_threshold(&self.inner, plateau_start, threshold)
            .map(Into::into)
            .map_err(to_py)
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __len__(&self) -> usize {
        self.inner.volumes.len()
    }
}

#[pyfunction]
#[pyo3(signature = (text, seed=42, max_k=20, swap_divisor=10, backend="builtin", gzip_level=DEFAULT_GZIP_LEVEL))]
fn volume_curve(
    text: &str,
    seed: u64,
    max_k: usize,
    swap_divisor: u64,
    backend: &str,
    gzip_level: u32,
) -> PyResult<PyVolumeCurve> {
    let cfg = config(
        seed,
        max_k,
        swap_divisor,
        0,
        DEFAULT_THRESHOLD,
        backend,
        gzip_level,
    )?;
    let doc = Document::new("<python>", text);
    let mut inner = chi::volume_curve(
        &doc,
        &cfg.schedule,
        ::textchi::Prng::new(seed),
        &cfg.backend,
    )
    .map_err(to_py)?;
    inner.seed = seed;
    Ok(PyVolumeCurve { inner })
}

/// Full pipeline for one text: returns `(ChiReport, VolumeCurve)`.
#[pyfunction]
#[pyo3(signature = (
    text, seed=42, max_k=20, swap_divisor=10, plateau_start=DEFAULT_PLATEAU_START,
    threshold=DEFAULT_THRESHOLD, backend="builtin", gzip_level=DEFAULT_GZIP_LEVEL
))]
#[allow(clippy::too_many_arguments)]
fn analyze(
    text: &str,
    seed: u64,
    max_k: usize,
    swap_divisor: u64,
    plateau_start: usize,
    threshold: f64,
    backend: &str,
    gzip_level: u32,
) -> PyResult<(PyChiReport, PyVolumeCurve)> {
    let cfg = config(
        seed,
        max_k,
        swap_divisor,
        plateau_start,
        threshold,
        backend,
        gzip_level,
    )?;
    let a = chi::analyze(&Document::new("<python>", text), &cfg).map_err(to_py)?;
    Ok((a.report.into(), PyVolumeCurve { inner: a.curve }))
}

/// `[(length, symbols, chi), ...]` for growing prefixes of `text`.
#[pyfunction]
#[pyo3(signature = (text, lengths, seed=42, plateau_start=DEFAULT_PLATEAU_START, backend="builtin"))]
fn chi_vs_length(
    text: &str,
    lengths: Vec<usize>,
    seed: u64,
    plateau_start: usize,
    backend: &str,
) -> PyResult<Vec<(usize, usize, f64)>> {
    let cfg = config(
        seed,
        20,
        10,
        plateau_start,
        DEFAULT_THRESHOLD,
        backend,
        DEFAULT_GZIP_LEVEL,
    )?;
    let series =
        chi::chi_vs_length(&Document::new("<python>", text), &lengths, &cfg).map_err(to_py)?;
    Ok(series
        .into_iter()
        .map(|p| (p.length, p.symbols, p.chi))
        .collect())
}

/// `[(word, weight), ...]` in rank order.
#[pyfunction]
#[pyo3(signature = (size, exponent=zipf::DEFAULT_EXPONENT, seed=1))]
fn build_vocabulary(size: usize, exponent: f64, seed: u64) -> PyResult<Vec<(String, f64)>> {
    let v =
        zipf::build_vocabulary(size, exponent, &mut ::textchi::Prng::new(seed)).map_err(to_py)?;
    Ok(v.words()
        .iter()
        .cloned()
        .zip(v.weights().iter().copied())
        .collect())
}

/// Artificial Zipf text; vocabulary and word draws both come from `seed`.
#[pyfunction]
#[pyo3(signature = (
    seed, vocab_size=zipf::DEFAULT_VOCAB_SIZE, exponent=zipf::DEFAULT_EXPONENT,
    symbols=zipf::DEFAULT_TARGET_SYMBOLS
))]
fn generate_text(seed: u64, vocab_size: usize, exponent: f64, symbols: usize) -> PyResult<String> {
    zipf::generate_from_seed(seed, vocab_size, exponent, symbols, "<python>")
        .map(|g| g.document.content)
        .map_err(to_py)
}

/// `[(rank, word, frequency), ...]`.
#[pyfunction]
fn empirical_rank_frequency(text: &str) -> PyResult<Vec<(usize, String, u64)>> {
    let rf = zipf::empirical_rank_frequency(&Document::new("<python>", text)).map_err(to_py)?;
    Ok(rf
        .into_iter()
        .map(|r| (r.rank, r.word, r.frequency))
        .collect())
}

fn json_to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn report_from_py(py: Python<'_>, obj: &Bound<'_, PyAny>) -> PyResult<corpus::CorpusReport> {
    let text: String = py
        .import("json")?
        .call_method1("dumps", (obj,))?
        .extract()?;
    serde_json::from_str(&text)
        .map_err(|e| PyValueError::new_err(format!("not a corpus report: {e}")))
}

/// Analyzes `[(source_id, text), ...]` and returns the corpus report as a dict.
#[pyfunction]
#[pyo3(signature = (docs, seed=42, threshold=DEFAULT_THRESHOLD, backend="builtin"))]
fn analyze_corpus<'py>(
    py: Python<'py>,
    docs: Vec<(String, String)>,
    seed: u64,
    threshold: f64,
    backend: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(
        seed,
        20,
        10,
        DEFAULT_PLATEAU_START,
        threshold,
        backend,
        DEFAULT_GZIP_LEVEL,
    )?;
    let docs: Vec<Document> = docs
        .into_iter()
        .map(|(id, text)| Document::new(id, text))
        .collect();
    let report = py
        .detach(|| corpus::analyze_corpus(&docs, &cfg))
        .map_err(to_py)?;
    json_to_py(py, &report)
}

#[pyfunction]
fn rank_distribution(py: Python<'_>, report: &Bound<'_, PyAny>) -> PyResult<Vec<(usize, f64)>> {
    Ok(corpus::rank_distribution(&report_from_py(py, report)?))
}

#[pyfunction]
fn compare_groups<'py>(
    py: Python<'py>,
    real: &Bound<'py, PyAny>,
    artificial: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let cmp = corpus::compare_groups(&report_from_py(py, real)?, &report_from_py(py, artificial)?)
        .map_err(to_py)?;
    json_to_py(py, &cmp)
}

#[pymodule]
#[pyo3(name = "textchi")]
fn textchi_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPrng>()?;
    m.add_class::<PyChiReport>()?;
    m.add_class::<PyVolumeCurve>()?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(serialize, m)?)?;
    m.add_function(wrap_pyfunction!(symbol_count, m)?)?;
    m.add_function(wrap_pyfunction!(atomic_swap, m)?)?;
    m.add_function(wrap_pyfunction!(intermix_states, m)?)?;
    m.add_function(wrap_pyfunction!(lz_parse, m)?)?;
    m.add_function(wrap_pyfunction!(lz_decode, m)?)?;
    m.add_function(wrap_pyfunction!(compressed_size, m)?)?;
    m.add_function(wrap_pyfunction!(volume_curve, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(chi_vs_length, m)?)?;
    m.add_function(wrap_pyfunction!(build_vocabulary, m)?)?;
    m.add_function(wrap_pyfunction!(generate_text, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_rank_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(rank_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(compare_groups, m)?)?;
    Ok(())
}
