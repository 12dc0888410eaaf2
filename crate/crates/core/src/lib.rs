//! Word-order connectivity of texts.
//!
//! A document is tokenized into words, progressively intermixed by seeded
//! random swaps, and every intermediate state is compressed. Coherent text
//! loses compressibility as its word order is destroyed; a bag of words does
//! not. The ratio χ of the saturated compressed volume to the original one
//! separates the two.

pub mod chi;
pub mod compress;
pub mod corpus;
pub mod error;
pub mod permute;
pub mod text_model;
pub mod zipf;

pub use chi::{
    analyze, chi, chi_vs_length, chi_with_threshold, classify, volume_curve, Analysis,
    AnalysisConfig, ChiReport, LengthPoint, Verdict, VolumeCurve,
};
pub use compress::{
    compress_via_backend, compressed_size, lz_decode, lz_parse, Backend, BackendKind,
    CompressedVolume, CompressorConfig, LzToken,
};
pub use corpus::{
    analyze_corpus, compare_groups, rank_distribution, CorpusReport, GroupComparison,
};
pub use error::{Error, Result};
pub use permute::{atomic_swap, intermix_states, IntermixSchedule, Prng};
pub use text_model::{serialize, symbol_count, tokenize, Document, TextEncoding, WordSequence};
pub use zipf::{build_vocabulary, empirical_rank_frequency, generate_text, ZipfVocabulary};
