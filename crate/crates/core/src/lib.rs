//! Corpus analytics for summarization domain adaptation.
//!
//! * [`corpus`]: JSONL loading, the word definition, counts and sampling.
//! * [`rouge`]: ROUGE-N and ROUGE-L.
//! * [`metrics`]: compression ratio α, abstraction level β, learning
//!   difficulty λ = αβ, gain, LD-Gain = λ·gain, and cross-domain overlap γ.
//! * [`predict`]: least-squares LD-Gain ~ γ line and ROUGE prediction.
//! * [`chunker`]: equal-size chunks and cumulative training stages.
//! * [`plot`]: SVG rendering of fitted lines.

pub mod chunker;
pub mod corpus;
pub mod error;
pub mod metrics;
pub mod plot;
pub mod predict;
pub mod rouge;

pub use chunker::{
    build_stages, split_chunks, stage_overlap_report, ChunkPlan, ReportUnit, Stage, StageReport,
};
pub use corpus::{
    load_jsonl, load_jsonl_with, sample_subset, tokenize, vocab, word_count, Dataset,
    DatasetSummary, LoadOptions, Sample, Scope, TokenizerConfig, Vocab, WordSeq,
};
pub use error::{Error, Result};
pub use metrics::{
    abstraction_level, compression_ratio, cross_domain_overlap, gain, ld_gain, learning_difficulty,
    pair_overlap, AdaptationRecord, Candidate, DifficultyReport, GammaUnit, OverlapResult,
};
pub use predict::{
    evaluate_fit, fit_ols, predict_ld_gain, predict_rouge, FitPoint, LinearModel, Prediction,
};
pub use rouge::{corpus_rouge, rouge_l, rouge_n, RougeScore, RougeVariant};
