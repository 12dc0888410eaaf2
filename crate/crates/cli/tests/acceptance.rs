//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use textchi::text_model::word_prefix;
use textchi::zipf::generate_from_seed;
use textchi::{
    analyze, chi_vs_length, intermix_states, lz_decode, lz_parse, tokenize, Analysis,
    AnalysisConfig, CompressorConfig, Document, IntermixSchedule, Prng, TextEncoding, WordSequence,
};

const BOOKS: [&str; 3] = [
    "moby_dick.txt",
    "genesis_kjv.txt",
    "roosevelt_1907_annual_message.txt",
];

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn books_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/books")
}

fn load(name: &str) -> Document {
    Document::load(books_dir().join(name), TextEncoding::Utf8).expect("book fixture")
}

struct Books {
    docs: Vec<Document>,
    runs: Vec<(Analysis, Duration)>,
}

impl Books {
    fn new() -> Self {
        let cfg = AnalysisConfig::default();
        let docs: Vec<Document> = BOOKS.iter().map(|b| load(b)).collect();
        let runs = docs
            .iter()
            .map(|d| {
                let t = Instant::now();
                let a = analyze(d, &cfg).expect("book analysis");
                (a, t.elapsed())
            })
            .collect();
        Self { docs, runs }
    }
}

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn early_growth(b: &Books) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, (a, took)) in BOOKS.iter().zip(&b.runs) {
        let v = &a.curve.volumes;
        let slack = 0.005 * v[0] as f64;
        let worst = (0..6)
            .map(|k| v[k] as f64 - v[k + 1] as f64)
            .fold(f64::NEG_INFINITY, f64::max);
        ok &= worst <= slack && *took < Duration::from_secs(30);
        parts.push(format!(
            "{name}: max drop {worst:.0} B (allowed {slack:.0}), {:.2}s",
            took.as_secs_f64()
        ));
    }
    check(ok, parts.join("; "))
}

fn plateau_flat(b: &Books) -> Outcome {
    let r: Vec<f64> = b
        .runs
        .iter()
        .map(|(a, _)| a.report.fluctuation_ratio)
        .collect();
    check(
        r.iter().all(|&x| x <= 0.25),
        format!("fluctuation ratios {r:.3?} (limit 0.25)"),
    )
}

fn books_above_one(b: &Books) -> Outcome {
    let c: Vec<f64> = b.runs.iter().map(|(a, _)| a.report.chi).collect();
    check(
        c.iter().all(|&x| x > 1.02),
        format!("chi {c:.4?} (need > 1.02)"),
    )
}

fn zipf_near_one(b: &Books) -> Outcome {
    let t = Instant::now();
    let cfg = AnalysisConfig::default();
    let mut chis = Vec::new();
    for seed in 1..=20 {
        let g = generate_from_seed(seed, 1000, 1.0, 10_000, format!("zipf_{seed}"))
            .map_err(|e| e.to_string())?;
        chis.push(
            analyze(&g.document, &cfg)
                .map_err(|e| e.to_string())?
                .report
                .chi,
        );
    }
    let mut book_floor = f64::INFINITY;
    for d in &b.docs {
        let frag = Document::new(d.source_id.clone(), word_prefix(&d.content, 10_000));
        book_floor = book_floor.min(analyze(&frag, &cfg).map_err(|e| e.to_string())?.report.chi);
    }
    let took = t.elapsed();
    let worst = chis.iter().map(|c| (c - 1.0).abs()).fold(0.0, f64::max);
    let max = chis.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    check(
        worst <= 0.03 && max < book_floor && took < Duration::from_secs(60),
        format!(
            "max |chi-1| {worst:.4} (limit 0.03), max zipf chi {max:.4} < min 10k-book chi {book_floor:.4}, {:.2}s",
            took.as_secs_f64()
        ),
    )
}

fn grows_with_length(b: &Books) -> Outcome {
    let lengths = [10_000, 20_000, 50_000, 100_000, 200_000];
    let pts = chi_vs_length(&b.docs[0], &lengths, &AnalysisConfig::default())
        .map_err(|e| e.to_string())?;
    let series: Vec<String> = pts
        .iter()
        .map(|p| format!("{}k:{:.4}", p.length / 1000, p.chi))
        .collect();
    check(
        pts[4].chi > pts[0].chi,
        format!("{} ({})", series.join(" "), BOOKS[0]),
    )
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn multiset_conserved() -> Outcome {
    let words = prop::collection::vec("[a-f]{1,3}|[A-Za-z.,;'\u{e9}]{1,9}", 2..400);
    let mut r = runner(1000);
    r.run(&(words, any::<u64>()), |(words, seed)| {
        let seq = WordSequence::new(words).unwrap();
        let want = seq.sorted_tokens();
        let states =
            intermix_states(&seq, &IntermixSchedule::default(), &mut Prng::new(seed)).unwrap();
        for s in &states {
            prop_assert_eq!(s.sorted_tokens(), want.clone());
        }
        Ok(())
    })
    .map(|_| "1000 random sequences, all 21 states keep the token multiset".to_owned())
    .map_err(|e| e.to_string())
}

fn lz_round_trip() -> Outcome {
    let data = prop_oneof![
        prop::collection::vec(any::<u8>(), 1..=10_000),
        prop::collection::vec(0u8..4, 1..=10_000),
        prop::collection::vec(prop::sample::select(b"the cat sat ".to_vec()), 1..=10_000),
    ];
    let cfg = CompressorConfig::default();
    let mut r = runner(10_000);
    r.run(&data, |bytes| {
        let tokens = lz_parse(&bytes, &cfg).unwrap();
        prop_assert_eq!(lz_decode(&tokens).unwrap(), bytes);
        Ok(())
    })
    .map(|_| "10000 random byte strings of length 1..=10000 decode to the input".to_owned())
    .map_err(|e| e.to_string())
}

fn batch_deterministic(b: &Books) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).map_err(|e| e.to_string())?;

    let mut written = 0;
    'books: for d in &b.docs {
        let mut rest = d.content.as_str();
        for _ in 0..7 {
            let frag = word_prefix(rest.trim_start(), 10_000);
            if frag.is_empty() || written == 20 {
                break 'books;
            }
            let name = format!("book_{written:02}.txt");
            fs::write(corpus.join(name), frag).map_err(|e| e.to_string())?;
            rest = &rest.trim_start()[frag.len()..];
            written += 1;
        }
    }

    let bin = env!("CARGO_BIN_EXE_textchi");
    let gen = Command::new(bin)
        .args(["generate", "--count", "20", "--seed", "1", "--out-dir"])
        .arg(&corpus)
        .output()
        .map_err(|e| e.to_string())?;
    if !gen.status.success() {
        return Err(String::from_utf8_lossy(&gen.stderr).into_owned());
    }

    let mut outputs = Vec::new();
    for run in ["a.json", "b.json"] {
        let out = dir.path().join(run);
        let st = Command::new(bin)
            .arg("batch")
            .arg(&corpus)
            .args(["--seed", "7", "--out"])
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        if !st.success() {
            return Err(format!("batch exited with {st}"));
        }
        outputs.push(fs::read(&out).map_err(|e| e.to_string())?);
    }
    let report: textchi::CorpusReport =
        serde_json::from_slice(&outputs[0]).map_err(|e| e.to_string())?;
    check(
        written == 20 && report.entries.len() == 40 && outputs[0] == outputs[1],
        format!(
            "{} documents ({written} book fragments + 20 zipf), reports {} bytes, identical: {}",
            report.entries.len(),
            outputs[0].len(),
            outputs[0] == outputs[1]
        ),
    )
}

fn repeated_word() -> Outcome {
    let doc = Document::new("la", "la ".repeat(5000));
    let r = analyze(&doc, &AnalysisConfig::default())
        .map_err(|e| e.to_string())?
        .report;
    check(
        r.chi == 1.0 && r.fluctuation_ratio == 0.0,
        format!("chi {} fluctuation {}", r.chi, r.fluctuation_ratio),
    )
}

fn initial_ratio(b: &Books) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, (a, _)) in b.docs.iter().zip(&b.runs) {
        let raw = tokenize(d).map_err(|e| e.to_string())?.serialize().len() as f64;
        let r = a.report.v0 as f64 / raw;
        ok &= (0.15..=0.60).contains(&r);
        parts.push(format!("{}: {r:.3}", d.source_id));
    }
    check(
        ok,
        format!("V(0)/raw {} (band 0.15..0.60)", parts.join(", ")),
    )
}

fn main() {
    let books = Books::new();
    let criteria: Vec<Criterion> = vec![
        (
            "volume grows over early intermixing",
            Box::new(|| early_growth(&books)),
        ),
        (
            "plateau fluctuation bounded",
            Box::new(|| plateau_flat(&books)),
        ),
        (
            "books score chi above 1.02",
            Box::new(|| books_above_one(&books)),
        ),
        (
            "zipf texts score chi near 1, below books",
            Box::new(|| zipf_near_one(&books)),
        ),
        (
            "chi grows with fragment length",
            Box::new(|| grows_with_length(&books)),
        ),
        (
            "intermixing conserves the word multiset",
            Box::new(multiset_conserved),
        ),
        ("builtin compressor round-trips", Box::new(lz_round_trip)),
        (
            "batch output is byte-identical across runs",
            Box::new(|| batch_deterministic(&books)),
        ),
        (
            "repeated-word document is exactly flat",
            Box::new(repeated_word),
        ),
        (
            "initial compression ratio in band",
            Box::new(|| initial_ratio(&books)),
        ),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} criterion {:>2} {name}: {detail}", i + 1);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
