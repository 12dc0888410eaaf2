use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use textchi::chi::{DEFAULT_PLATEAU_START, DEFAULT_THRESHOLD};
use textchi::compress::DEFAULT_GZIP_LEVEL;
use textchi::corpus::{self, Conventions, CorpusReport};
use textchi::zipf::{self, DEFAULT_EXPONENT, DEFAULT_TARGET_SYMBOLS, DEFAULT_VOCAB_SIZE};
use textchi::{
    analyze, chi_vs_length, compare_groups, empirical_rank_frequency, AnalysisConfig, Backend,
    ChiReport, CompressorConfig, Document, IntermixSchedule, TextEncoding,
};

#[derive(Parser)]
#[command(
    name = "textchi",
    version,
    about = "Measure word-order connectivity of texts through compression"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Volume curve and χ report for one document.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        opts: AnalysisOpts,
        /// Write the volume curve CSV here instead of after the JSON on stdout.
        #[arg(long)]
        curve_out: Option<PathBuf>,
    },
    /// χ for growing prefixes of one document, as CSV.
    CurveByLength {
        file: PathBuf,
        /// Comma-separated, strictly increasing fragment lengths in symbols.
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        #[command(flatten)]
        opts: AnalysisOpts,
    },
    /// Write artificial Zipf texts plus a manifest.
    Generate {
        #[arg(long, default_value_t = DEFAULT_VOCAB_SIZE)]
        vocab_size: usize,
        #[arg(long, default_value_t = DEFAULT_EXPONENT)]
        exponent: f64,
        #[arg(long, default_value_t = DEFAULT_TARGET_SYMBOLS)]
        symbols: usize,
        /// Seed of the first document; document i uses seed + i.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Analyze every matching file of a directory and rank by χ.
    Batch {
        dir: PathBuf,
        #[arg(long, default_value = "*.txt")]
        glob: String,
        #[command(flatten)]
        opts: AnalysisOpts,
        /// Report JSON path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also export the ranked entries as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare χ of a real and an artificial batch report.
    Compare {
        #[arg(long)]
        real: PathBuf,
        #[arg(long)]
        artificial: PathBuf,
    },
    /// Word rank-frequency table of one document, as CSV.
    RankFrequency {
        file: PathBuf,
        #[arg(long)]
        latin1: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Builtin,
    Gzip,
}

#[derive(Args)]
struct AnalysisOpts {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    max_k: usize,
    /// Denominator in floor(k * N / divisor).
    #[arg(long, default_value_t = 10)]
    swap_divisor: u64,
    #[arg(long, default_value_t = DEFAULT_PLATEAU_START)]
    plateau_start: usize,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, value_enum, default_value_t = BackendArg::Builtin)]
    backend: BackendArg,
    #[arg(long, default_value_t = DEFAULT_GZIP_LEVEL, value_parser = clap::value_parser!(u32).range(1..=9))]
    gzip_level: u32,
    /// Decode files that are not valid UTF-8 as ISO-8859-1.
    #[arg(long)]
    latin1: bool,
}

impl AnalysisOpts {
    fn config(&self) -> Result<AnalysisConfig> {
        let backend = match self.backend {
            BackendArg::Builtin => Backend::Builtin(CompressorConfig::default()),
            BackendArg::Gzip => Backend::Gzip {
                level: self.gzip_level,
            },
        };
        let cfg = AnalysisConfig {
            seed: self.seed,
            schedule: IntermixSchedule::new(self.max_k, self.swap_divisor)?,
            backend,
            plateau_start: self.plateau_start,
            threshold: self.threshold,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn encoding(&self) -> TextEncoding {
        encoding(self.latin1)
    }
}

fn encoding(latin1: bool) -> TextEncoding {
    if latin1 {
        TextEncoding::Utf8OrLatin1
    } else {
        TextEncoding::Utf8
    }
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    source_id: &'a str,
    #[serde(flatten)]
    report: &'a ChiReport,
    words: usize,
    seed: u64,
    schedule: IntermixSchedule,
    backend: String,
    conventions: Conventions,
}

#[derive(Serialize)]
struct ManifestEntry {
    file: String,
    seed: u64,
    vocab_size: usize,
    exponent: f64,
    target_symbols: usize,
    symbols: usize,
}

#[derive(Serialize)]
struct Manifest {
    generator: &'static str,
    first_seed: u64,
    count: usize,
    files: Vec<ManifestEntry>,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Analyze {
            file,
            opts,
            curve_out,
        } => {
            let cfg = opts.config()?;
            let doc = Document::load(&file, opts.encoding())?;
            let analysis = analyze(&doc, &cfg)?;
            let output = AnalyzeOutput {
                source_id: &doc.source_id,
                report: &analysis.report,
                words: analysis.curve.words,
                seed: cfg.seed,
                schedule: cfg.schedule,
                backend: cfg.backend.describe(),
                conventions: Conventions::default(),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&output)?)?;
            let csv = analysis.curve.to_csv();
            match curve_out {
                Some(path) => write_file(&path, &csv)?,
                None => write!(out, "\n{csv}")?,
            }
        }
        Command::CurveByLength {
            file,
            lengths,
            opts,
        } => {
            let cfg = opts.config()?;
            let doc = Document::load(&file, opts.encoding())?;
            writeln!(out, "length,symbols,chi")?;
            for p in chi_vs_length(&doc, &lengths, &cfg)? {
                writeln!(out, "{},{},{}", p.length, p.symbols, p.chi)?;
            }
        }
        Command::Generate {
            vocab_size,
            exponent,
            symbols,
            seed,
            count,
            out_dir,
        } => {
            if count == 0 {
                bail!("--count must be at least 1");
            }
            fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            let mut files = Vec::with_capacity(count);
            for i in 0..count {
                let doc_seed = seed.wrapping_add(i as u64);
                let name = format!("zipf_{doc_seed:06}.txt");
                let g = zipf::generate_from_seed(doc_seed, vocab_size, exponent, symbols, &name)?;
                write_file(&out_dir.join(&name), &g.document.content)?;
                files.push(ManifestEntry {
                    file: name,
                    seed: doc_seed,
                    vocab_size,
                    exponent,
                    target_symbols: symbols,
                    symbols: g.document.symbol_count(),
                });
            }
            let manifest = Manifest {
                generator: "i.i.d. Zipf draws over pseudowords of 1-12 letters",
                first_seed: seed,
                count,
                files,
            };
            write_file(
                &out_dir.join("manifest.json"),
                &serde_json::to_string_pretty(&manifest)?,
            )?;
            writeln!(out, "wrote {count} documents to {}", out_dir.display())?;
        }
        Command::Batch {
            dir,
            glob,
            opts,
            out: report_path,
            csv,
        } => {
            let cfg = opts.config()?;
            let docs = corpus::load_dir(&dir, &glob, opts.encoding())?;
            let report = corpus::analyze_corpus(&docs, &cfg)?;
            let json = serde_json::to_string_pretty(&report)?;
            match report_path {
                Some(path) => write_file(&path, &json)?,
                None => writeln!(out, "{json}")?,
            }
            if let Some(path) = csv {
                write_file(&path, &report.to_csv()?)?;
            }
        }
        Command::Compare { real, artificial } => {
            let real = read_report(&real)?;
            let artificial = read_report(&artificial)?;
            let cmp = compare_groups(&real, &artificial)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&cmp)?)?;
        }
        Command::RankFrequency { file, latin1 } => {
            let doc = Document::load(&file, encoding(latin1))?;
            writeln!(out, "rank,word,frequency")?;
            for r in empirical_rank_frequency(&doc)? {
                writeln!(
                    out,
                    "{},\"{}\",{}",
                    r.rank,
                    r.word.replace('"', "\"\""),
                    r.frequency
                )?;
            }
        }
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn read_report(path: &Path) -> Result<CorpusReport> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing report {}", path.display()))
}
