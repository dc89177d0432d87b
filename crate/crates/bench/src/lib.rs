//! Seeded synthetic corpora for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lexshift_core::{Dataset, TokenizerConfig};

/// A word drawn from a heavy-tailed distribution over `vocab` types.
fn word(rng: &mut ChaCha8Rng, vocab: u32) -> String {
    let rank = (vocab as f64).powf(rng.random_range(0.0..1.0)) as u32;
    format!("w{rank}")
}

pub fn text(rng: &mut ChaCha8Rng, len: usize, vocab: u32) -> String {
    (0..len)
        .map(|_| word(rng, vocab))
        .collect::<Vec<_>>()
        .join(" ")
}

/// `n` document/summary pairs with ~`doc_len` and ~`doc_len / 10` words.
pub fn corpus(name: &str, n: usize, doc_len: usize, vocab: u32, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(String, String)> = (0..n)
        .map(|_| {
            let dl = rng.random_range(doc_len / 2..=doc_len * 3 / 2);
            let doc = text(&mut rng, dl, vocab);
            let sum = text(&mut rng, (dl / 10).max(1), vocab);
            (doc, sum)
        })
        .collect();
    Dataset::from_texts(name, name, TokenizerConfig::default(), pairs)
        .expect("synthetic corpus is never degenerate")
}
