//! ROUGE-N and ROUGE-L over word sequences.
//!
//! Scores live on [0, 1]. The F-measure is the scalar used everywhere else
//! in the crate.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    /// Builds a score from an overlap count and the two denominators. Empty
    /// denominators give zero.
    pub fn from_counts(overlap: usize, candidate_total: usize, reference_total: usize) -> Self {
        if overlap == 0 || candidate_total == 0 || reference_total == 0 {
            return RougeScore::default();
        }
        let precision = overlap as f64 / candidate_total as f64;
        let recall = overlap as f64 / reference_total as f64;
        RougeScore {
            precision,
            recall,
            f1: f_measure(precision, recall),
        }
    }
}

pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Largest supported n-gram order.
pub const MAX_NGRAM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RougeVariant {
    N(usize),
    #[default]
    L,
}

impl RougeVariant {
    pub fn ngram(n: usize) -> Result<Self> {
        if (1..=MAX_NGRAM).contains(&n) {
            Ok(RougeVariant::N(n))
        } else {
            Err(Error::out_of_range(
                "ROUGE n",
                format!("{n} (supported 1..={MAX_NGRAM})"),
            ))
        }
    }

    pub fn score<T: Eq + Hash>(self, candidate: &[T], reference: &[T]) -> RougeScore {
        match self {
            RougeVariant::N(n) => rouge_n(candidate, reference, n),
            RougeVariant::L => rouge_l(candidate, reference),
        }
    }
}

impl fmt::Display for RougeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RougeVariant::N(n) => write!(f, "{n}"),
            RougeVariant::L => f.write_str("l"),
        }
    }
}

impl FromStr for RougeVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let s = s.strip_prefix("rouge-").unwrap_or(&s);
        if s == "l" {
            return Ok(RougeVariant::L);
        }
        let n: usize = s
            .parse()
            .map_err(|_| format!("unknown ROUGE variant {s:?} (expected 1..4 or l)"))?;
        RougeVariant::ngram(n).map_err(|e| e.to_string())
    }
}

impl Serialize for RougeVariant {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RougeVariant {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn ngram_counts<T: Eq + Hash>(seq: &[T], n: usize) -> HashMap<&[T], usize> {
    let mut counts = HashMap::new();
    for gram in seq.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// Clipped n-gram overlap. Sequences shorter than `n` score zero.
///
/// # Panics
/// If `n == 0`.
pub fn rouge_n<T: Eq + Hash>(candidate: &[T], reference: &[T], n: usize) -> RougeScore {
    assert!(n >= 1, "ROUGE-N needs n >= 1");
    if candidate.len() < n || reference.len() < n {
        return RougeScore::default();
    }
    let cand = ngram_counts(candidate, n);
    let refs = ngram_counts(reference, n);
    let (small, large) = if cand.len() <= refs.len() {
        (&cand, &refs)
    } else {
        (&refs, &cand)
    };
    let overlap: usize = small
        .iter()
        .map(|(g, &c)| large.get(g).map_or(0, |&r| c.min(r)))
        .sum();
    RougeScore::from_counts(overlap, candidate.len() + 1 - n, reference.len() + 1 - n)
}

/// Length of the longest common subsequence, O(|a|·|b|) time and O(min) space.
pub fn lcs_len<T: Eq>(a: &[T], b: &[T]) -> usize {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return 0;
    }
    let mut row = vec![0usize; short.len() + 1];
    for x in long {
        let mut diag = 0;
        for (j, y) in short.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[short.len()]
}

/// Sequence-level ROUGE-L.
pub fn rouge_l<T: Eq>(candidate: &[T], reference: &[T]) -> RougeScore {
    RougeScore::from_counts(
        lcs_len(candidate, reference),
        candidate.len(),
        reference.len(),
    )
}

/// Mean F1 over `(candidate, reference)` pairs. Per-pair scores are computed in
/// parallel and summed in input order.
pub fn corpus_rouge<C, R, T>(pairs: &[(C, R)], variant: RougeVariant) -> Result<f64>
where
    C: AsRef<[T]> + Sync,
    R: AsRef<[T]> + Sync,
    T: Eq + Hash + Sync,
{
    if pairs.is_empty() {
        return Err(Error::EmptyDataset("no pairs to score".into()));
    }
    let f1: Vec<f64> = pairs
        .par_iter()
        .map(|(c, r)| variant.score(c.as_ref(), r.as_ref()).f1)
        .collect();
    Ok(f1.iter().sum::<f64>() / f1.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const CAND: [&str; 3] = ["the", "cat", "sat"];
    const REF: [&str; 5] = ["the", "cat", "on", "the", "mat"];

    #[test]
    fn rouge_1_clipped_example() {
        let s = rouge_n(&CAND, &REF, 1);
        assert_relative_eq!(s.precision, 2.0 / 3.0);
        assert_relative_eq!(s.recall, 2.0 / 5.0);
        assert_relative_eq!(s.f1, 0.5);
    }

    #[test]
    fn rouge_l_example() {
        assert_eq!(lcs_len(&CAND, &REF), 2);
        let s = rouge_l(&CAND, &REF);
        assert_relative_eq!(s.precision, 2.0 / 3.0);
        assert_relative_eq!(s.recall, 0.4);
        assert_relative_eq!(s.f1, 0.5);
    }

    #[test]
    fn identity_and_disjoint() {
        for s in [
            rouge_n(&REF, &REF, 1),
            rouge_n(&REF, &REF, 2),
            rouge_l(&REF, &REF),
        ] {
            assert_eq!(
                s,
                RougeScore {
                    precision: 1.0,
                    recall: 1.0,
                    f1: 1.0
                }
            );
        }
        let other = ["dog", "ran"];
        assert_eq!(rouge_n(&CAND, &other, 1), RougeScore::default());
        assert_eq!(rouge_l(&CAND, &other), RougeScore::default());
    }

    #[test]
    fn reversed_increasing_sequence_has_lcs_one() {
        let seq = [1, 2, 3, 4, 5];
        let rev: Vec<i32> = seq.iter().rev().copied().collect();
        assert_eq!(lcs_len(&seq, &rev), 1);
    }

    #[test]
    fn short_sequences_score_zero() {
        assert_eq!(rouge_n(&["a"], &["a"], 2), RougeScore::default());
        let empty: [&str; 0] = [];
        assert_eq!(rouge_l(&empty, &REF), RougeScore::default());
    }

    #[test]
    fn corpus_mean() {
        let a = vec!["x", "y"];
        let b = vec!["z"];
        assert_eq!(
            corpus_rouge(&[(a.clone(), a.clone())], RougeVariant::L).unwrap(),
            1.0
        );
        assert_eq!(
            corpus_rouge(&[(a.clone(), a.clone()), (a, b)], RougeVariant::L).unwrap(),
            0.5
        );
        let none: [(Vec<&str>, Vec<&str>); 0] = [];
        assert!(corpus_rouge(&none, RougeVariant::L).is_err());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("l".parse::<RougeVariant>().unwrap(), RougeVariant::L);
        assert_eq!("L".parse::<RougeVariant>().unwrap(), RougeVariant::L);
        assert_eq!("2".parse::<RougeVariant>().unwrap(), RougeVariant::N(2));
        assert!("5".parse::<RougeVariant>().is_err());
        assert!("0".parse::<RougeVariant>().is_err());
        assert_eq!(serde_json::to_string(&RougeVariant::N(1)).unwrap(), "\"1\"");
    }
}
