//! Document/summary corpora: loading, the word definition, counting and sampling.
//!
//! A [`Dataset`] is tokenized once at construction with a fixed
//! [`TokenizerConfig`]; every metric downstream works on those word sequences.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

use crate::error::{Error, Result};

/// Ordered list of words produced by [`tokenize`].
pub type WordSeq = Vec<String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    /// Strip leading and trailing Unicode punctuation (general category P*) from each token.
    pub strip_punctuation: bool,
    /// Tokens shorter than this many characters are dropped.
    pub min_token_len: usize,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            lowercase: true,
            strip_punctuation: true,
            min_token_len: 1,
        }
    }
}

fn is_punctuation(c: char) -> bool {
    c.general_category_group() == GeneralCategoryGroup::Punctuation
}

/// Splits `text` on Unicode whitespace and normalizes each token.
///
/// Internal punctuation survives (`état-major` stays one word); only the
/// token's edges are trimmed.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> WordSeq {
    let min_len = config.min_token_len.max(1);
    text.split_whitespace()
        .filter_map(|raw| {
            let trimmed = if config.strip_punctuation {
                raw.trim_matches(is_punctuation)
            } else {
                raw
            };
            if trimmed.is_empty() {
                return None;
            }
            let word = if config.lowercase {
                trimmed.to_lowercase()
            } else {
                trimmed.to_owned()
            };
            (word.chars().count() >= min_len).then_some(word)
        })
        .collect()
}

/// Which side of each sample a count or vocabulary covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    #[serde(rename = "docs")]
    Documents,
    #[serde(rename = "sums")]
    Summaries,
    #[default]
    Both,
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Documents => "docs",
            Scope::Summaries => "sums",
            Scope::Both => "both",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "docs" | "documents" => Ok(Scope::Documents),
            "sums" | "summaries" => Ok(Scope::Summaries),
            "both" => Ok(Scope::Both),
            other => Err(format!(
                "unknown scope {other:?} (expected docs, sums or both)"
            )),
        }
    }
}

/// One document/summary pair with its tokenized forms.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub id: String,
    pub document: String,
    pub summary: String,
    doc_words: WordSeq,
    sum_words: WordSeq,
}

impl Sample {
    fn tokenized(id: String, document: String, summary: String, config: &TokenizerConfig) -> Self {
        let doc_words = tokenize(&document, config);
        let sum_words = tokenize(&summary, config);
        Sample {
            id,
            document,
            summary,
            doc_words,
            sum_words,
        }
    }

    fn degenerate_side(&self) -> Option<&'static str> {
        if self.doc_words.is_empty() {
            Some("document")
        } else if self.sum_words.is_empty() {
            Some("summary")
        } else {
            None
        }
    }

    pub fn document_words(&self) -> &[String] {
        &self.doc_words
    }

    pub fn summary_words(&self) -> &[String] {
        &self.sum_words
    }

    /// Words of this sample under `scope`, documents first.
    pub fn words(&self, scope: Scope) -> impl Iterator<Item = &String> {
        let (doc, sum): (&[String], &[String]) = match scope {
            Scope::Documents => (&self.doc_words, &[]),
            Scope::Summaries => (&[], &self.sum_words),
            Scope::Both => (&self.doc_words, &self.sum_words),
        };
        doc.iter().chain(sum.iter())
    }

    pub fn word_count(&self, scope: Scope) -> u64 {
        let n = match scope {
            Scope::Documents => self.doc_words.len(),
            Scope::Summaries => self.sum_words.len(),
            Scope::Both => self.doc_words.len() + self.sum_words.len(),
        };
        n as u64
    }
}

/// An ordered, immutable collection of samples from one domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub domain_label: String,
    samples: Vec<Sample>,
    tokenizer: TokenizerConfig,
    skipped_degenerate: usize,
}

impl Dataset {
    /// Builds a dataset from `(id, document, summary)` triples, rejecting any
    /// pair whose document or summary tokenizes to nothing.
    pub fn from_pairs<I, S>(
        name: impl Into<String>,
        domain_label: impl Into<String>,
        config: TokenizerConfig,
        pairs: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let samples = pairs
            .into_iter()
            .map(|(id, doc, sum)| {
                let sample = Sample::tokenized(id.into(), doc.into(), sum.into(), &config);
                match sample.degenerate_side() {
                    Some(side) => Err(Error::DegenerateSample {
                        id: sample.id,
                        side,
                    }),
                    None => Ok(sample),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset {
            name: name.into(),
            domain_label: domain_label.into(),
            samples,
            tokenizer: config,
            skipped_degenerate: 0,
        })
    }

    /// Same as [`Dataset::from_pairs`] with ids `"0"`, `"1"`, ...
    pub fn from_texts<I, S>(
        name: impl Into<String>,
        domain_label: impl Into<String>,
        config: TokenizerConfig,
        pairs: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let triples = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (d, s))| (i.to_string(), d.into(), s.into()));
        Self::from_pairs(name, domain_label, config, triples)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn tokenizer(&self) -> &TokenizerConfig {
        &self.tokenizer
    }

    /// Records dropped by [`LoadOptions::skip_degenerate`] while loading.
    pub fn skipped_degenerate(&self) -> usize {
        self.skipped_degenerate
    }

    /// A new dataset holding the samples at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            name: self.name.clone(),
            domain_label: self.domain_label.clone(),
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
            tokenizer: self.tokenizer,
            skipped_degenerate: 0,
        }
    }

    /// Copy of this dataset under another name.
    pub fn renamed(&self, name: impl Into<String>) -> Dataset {
        let mut out = self.clone();
        out.name = name.into();
        out
    }

    /// Writes the raw samples back out in the JSONL input schema.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for s in &self.samples {
            let line = serde_json::to_string(&RawRecord {
                id: Some(s.id.clone()),
                document: Some(s.document.clone()),
                summary: Some(s.summary.clone()),
            })
            .map_err(std::io::Error::other)?;
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn summary(&self) -> DatasetSummary {
        let n = self.len();
        let doc_total = word_count(self, Scope::Documents);
        let sum_total = word_count(self, Scope::Summaries);
        let avg = |t: u64| if n == 0 { 0.0 } else { t as f64 / n as f64 };
        DatasetSummary {
            name: self.name.clone(),
            domain_label: self.domain_label.clone(),
            n_samples: n,
            doc_words_total: doc_total,
            sum_words_total: sum_total,
            doc_words_avg: avg(doc_total),
            sum_words_avg: avg(sum_total),
            tokenizer: self.tokenizer,
        }
    }
}

/// Per-dataset statistics in the layout of a dataset-statistics table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub name: String,
    pub domain_label: String,
    pub n_samples: usize,
    pub doc_words_total: u64,
    pub sum_words_total: u64,
    pub doc_words_avg: f64,
    pub sum_words_avg: f64,
    pub tokenizer: TokenizerConfig,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    document: Option<String>,
    summary: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Drop records with an empty tokenized side instead of failing.
    pub skip_degenerate: bool,
    /// Dataset name; defaults to the file stem.
    pub name: Option<String>,
    /// Domain label; defaults to the dataset name.
    pub domain_label: Option<String>,
}

/// Loads a JSONL file with default [`LoadOptions`].
pub fn load_jsonl(path: impl AsRef<Path>, config: &TokenizerConfig) -> Result<Dataset> {
    load_jsonl_with(path, config, &LoadOptions::default())
}

/// Loads a JSONL file: one object per line with string fields `document`,
/// `summary` and optionally `id`. Blank lines are ignored. Line numbers in
/// errors are 1-based; auto-assigned ids are the 0-based line index.
pub fn load_jsonl_with(
    path: impl AsRef<Path>,
    config: &TokenizerConfig,
    options: &LoadOptions,
) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = Vec::new();
    for chunk in BufReader::new(file).split(b'\n') {
        lines.push(chunk.map_err(|e| Error::io(path, e))?);
    }

    let parsed: Vec<Result<Option<Sample>>> = lines
        .into_par_iter()
        .enumerate()
        .map(|(index, bytes)| parse_line(index, bytes, config))
        .collect();

    let mut samples = Vec::with_capacity(parsed.len());
    let mut skipped = 0;
    for item in parsed {
        match item {
            Ok(Some(sample)) => samples.push(sample),
            Ok(None) => {}
            Err(Error::DegenerateRecord { .. }) if options.skip_degenerate => skipped += 1,
            Err(e) => return Err(e),
        }
    }

    let name = options.name.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".to_owned())
    });
    let domain_label = options.domain_label.clone().unwrap_or_else(|| name.clone());
    Ok(Dataset {
        name,
        domain_label,
        samples,
        tokenizer: *config,
        skipped_degenerate: skipped,
    })
}

fn parse_line(
    index: usize,
    mut bytes: Vec<u8>,
    config: &TokenizerConfig,
) -> Result<Option<Sample>> {
    let line = index + 1;
    if bytes.last() == Some(&b'\r') {
        bytes.pop();
    }
    let text = String::from_utf8(bytes).map_err(|_| Error::InvalidUtf8 { line })?;
    if text.trim().is_empty() {
        return Ok(None);
    }
    let raw: RawRecord = serde_json::from_str(&text).map_err(|e| Error::MalformedJson {
        line,
        message: e.to_string(),
    })?;
    let document = raw.document.ok_or(Error::MissingField {
        line,
        field: "document",
    })?;
    let summary = raw.summary.ok_or(Error::MissingField {
        line,
        field: "summary",
    })?;
    let id = raw.id.unwrap_or_else(|| index.to_string());
    let sample = Sample::tokenized(id, document, summary, config);
    match sample.degenerate_side() {
        Some(side) => Err(Error::DegenerateRecord { line, side }),
        None => Ok(Some(sample)),
    }
}

/// Total number of words in `scope` across all samples.
pub fn word_count(dataset: &Dataset, scope: Scope) -> u64 {
    dataset
        .samples
        .par_iter()
        .map(|s| s.word_count(scope))
        .sum()
}

/// Word-frequency table with its unique-word set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocab {
    counts: HashMap<String, u64>,
    total: u64,
}

impl Vocab {
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut vocab = Vocab::default();
        for w in words {
            vocab.add(w.as_ref(), 1);
        }
        vocab
    }

    fn add(&mut self, word: &str, n: u64) {
        match self.counts.get_mut(word) {
            Some(c) => *c += n,
            None => {
                self.counts.insert(word.to_owned(), n);
            }
        }
        self.total += n;
    }

    /// Adds every count of `other` into `self`.
    pub fn merge(&mut self, other: &Vocab) {
        for (w, &c) in &other.counts {
            self.add(w, c);
        }
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.counts.contains_key(word)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn unique(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &HashMap<String, u64> {
        &self.counts
    }

    /// Unique words, sorted.
    pub fn words(&self) -> Vec<&str> {
        let mut words: Vec<&str> = self.counts.keys().map(String::as_str).collect();
        words.sort_unstable();
        words
    }
}

/// Frequency table over all tokens of `dataset` in `scope`.
pub fn vocab(dataset: &Dataset, scope: Scope) -> Vocab {
    dataset
        .samples
        .par_iter()
        .fold(Vocab::default, |mut acc, s| {
            for w in s.words(scope) {
                acc.add(w, 1);
            }
            acc
        })
        .reduce(Vocab::default, |mut a, b| {
            if a.unique() < b.unique() {
                let mut b = b;
                b.merge(&a);
                b
            } else {
                a.merge(&b);
                a
            }
        })
}

/// Uniform sample of `n` samples without replacement, keeping their relative order.
pub fn sample_subset(dataset: &Dataset, n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 || n > dataset.len() {
        return Err(Error::out_of_range(
            "sample size",
            format!("n = {n}, dataset has {} samples", dataset.len()),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices = rand::seq::index::sample(&mut rng, dataset.len(), n).into_vec();
    indices.sort_unstable();
    Ok(dataset.select(&indices))
}
