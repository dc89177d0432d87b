use std::path::PathBuf;

use clap::{ArgAction, Args, ValueEnum};
use serde::Serialize;

use lexshift_core::metrics::{Candidate, FillSettings, GammaUnit};
use lexshift_core::{RougeVariant, Scope, TokenizerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Lowercase tokens.
    #[arg(long, global = true, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = ArgAction::Set)]
    pub tokenizer_lowercase: bool,
    /// Strip leading/trailing punctuation from tokens.
    #[arg(long, global = true, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = ArgAction::Set)]
    pub strip_punctuation: bool,
    /// Drop tokens shorter than this many characters.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_token_len: u64,
    /// ROUGE variant: 1, 2, 3, 4 or l.
    #[arg(long, global = true, default_value = "l")]
    pub rouge: RougeVariant,
    /// Side scored as the ROUGE candidate for document/summary pairs.
    #[arg(long, global = true, default_value = "summary")]
    pub candidate: Candidate,
    /// Text used for overlap: docs, sums or both.
    #[arg(long, global = true, default_value = "both")]
    pub scope: Scope,
    /// Unit of γ values given on the command line or in input files.
    #[arg(long, global = true, default_value = "fraction")]
    pub gamma_unit: GammaUnit,
    /// Output format (default depends on the command).
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Skip records whose document or summary is empty after tokenization.
    #[arg(long, global = true)]
    pub skip_degenerate: bool,
}

/// Everything that can change a command's output, echoed into each artifact.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub tokenizer: TokenizerConfig,
    pub rouge_variant: RougeVariant,
    pub candidate: Candidate,
    pub overlap_scope: Scope,
    pub gamma_unit: GammaUnit,
    pub output_format: OutputFormat,
    pub seed: u64,
    pub skip_degenerate: bool,
}

impl GlobalArgs {
    pub fn tokenizer(&self) -> TokenizerConfig {
        TokenizerConfig {
            lowercase: self.tokenizer_lowercase,
            strip_punctuation: self.strip_punctuation,
            min_token_len: self.min_token_len as usize,
        }
    }

    pub fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.format.unwrap_or(default)
    }

    pub fn run_config(&self, default_format: OutputFormat) -> RunConfig {
        RunConfig {
            tokenizer: self.tokenizer(),
            rouge_variant: self.rouge,
            candidate: self.candidate,
            overlap_scope: self.scope,
            gamma_unit: self.gamma_unit,
            output_format: self.format_or(default_format),
            seed: self.seed,
            skip_degenerate: self.skip_degenerate,
        }
    }

    pub fn fill_settings(&self) -> FillSettings {
        FillSettings {
            scope: self.scope,
            variant: self.rouge,
            candidate: self.candidate,
        }
    }
}
