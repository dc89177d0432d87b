//! Equal-size chunking of a training set and cumulative training stages.
//!
//! Samples are shuffled with a seeded RNG and dealt round-robin into `k`
//! chunks, so chunk sizes differ by at most one. Stage `i` is the union of
//! chunks `0..=i`.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, Scope};
use crate::error::{Error, Result};
use crate::metrics::{cross_domain_overlap, AdaptationRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChunkPlan {
    pub k: usize,
    pub seed: u64,
    pub scope: Scope,
    /// Sample ids of each chunk, in dealing order.
    pub chunk_ids: Vec<Vec<String>>,
    pub word_counts: Vec<u64>,
    #[serde(skip)]
    members: Vec<Vec<usize>>,
}

impl ChunkPlan {
    /// Dataset positions of chunk `i`.
    pub fn members(&self, chunk: usize) -> &[usize] {
        &self.members[chunk]
    }

    pub fn chunk_sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub index: usize,
    pub member_chunks: Vec<usize>,
    pub cumulative_word_count: u64,
}

/// Shuffles with `seed` and deals samples round-robin into `k` chunks.
/// Word counts are measured in `scope`.
pub fn split_chunks(dataset: &Dataset, k: usize, seed: u64, scope: Scope) -> Result<ChunkPlan> {
    if k == 0 || k > dataset.len() {
        return Err(Error::out_of_range(
            "chunk count",
            format!("k = {k}, dataset has {} samples", dataset.len()),
        ));
    }
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut members: Vec<Vec<usize>> = (0..k)
        .map(|_| Vec::with_capacity(dataset.len() / k + 1))
        .collect();
    for (pos, &idx) in order.iter().enumerate() {
        members[pos % k].push(idx);
    }
    let samples = dataset.samples();
    let word_counts = members
        .iter()
        .map(|m| m.iter().map(|&i| samples[i].word_count(scope)).sum())
        .collect();
    let chunk_ids = members
        .iter()
        .map(|m| m.iter().map(|&i| samples[i].id.clone()).collect())
        .collect();
    Ok(ChunkPlan {
        k,
        seed,
        scope,
        chunk_ids,
        word_counts,
        members,
    })
}

/// Cumulative stages; stage word counts are prefix sums of chunk word counts.
pub fn build_stages(plan: &ChunkPlan) -> Vec<Stage> {
    let mut total = 0;
    plan.word_counts
        .iter()
        .enumerate()
        .map(|(index, &wc)| {
            total += wc;
            Stage {
                index,
                member_chunks: (0..=index).collect(),
                cumulative_word_count: total,
            }
        })
        .collect()
}

/// Sub-dataset of chunk `chunk`, in original dataset order.
pub fn chunk_dataset(dataset: &Dataset, plan: &ChunkPlan, chunk: usize) -> Dataset {
    let mut idx = plan.members(chunk).to_vec();
    idx.sort_unstable();
    dataset.select(&idx).renamed(format!("chunk{chunk}"))
}

/// Sub-dataset of stage `stage` (chunks `0..=stage`), in original dataset order.
pub fn stage_dataset(dataset: &Dataset, plan: &ChunkPlan, stage: usize) -> Dataset {
    let mut idx: Vec<usize> = (0..=stage)
        .flat_map(|c| plan.members(c).iter().copied())
        .collect();
    idx.sort_unstable();
    dataset.select(&idx).renamed(format!("stage{stage}"))
}

/// Writes `stage_00.jsonl`, `stage_01.jsonl`, ... into `dir` and returns the paths.
pub fn export_stages(dataset: &Dataset, plan: &ChunkPlan, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    (0..plan.k)
        .map(|s| {
            let path = dir.join(format!("stage_{s:02}.jsonl"));
            let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
            let mut out = BufWriter::new(file);
            stage_dataset(dataset, plan, s)
                .write_jsonl(&mut out)
                .and_then(|_| out.flush())
                .map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportUnit {
    #[default]
    Chunk,
    Stage,
}

impl ReportUnit {
    pub fn label(self, i: usize) -> String {
        match self {
            ReportUnit::Chunk => format!("chunk{i}"),
            ReportUnit::Stage => format!("stage{i}"),
        }
    }
}

impl std::str::FromStr for ReportUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chunk" => Ok(ReportUnit::Chunk),
            "stage" => Ok(ReportUnit::Stage),
            other => Err(format!(
                "unknown report unit {other:?} (expected chunk or stage)"
            )),
        }
    }
}

/// Word counts, γ per target and (optionally) LD-Gain per target, one column
/// per chunk or stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub unit: ReportUnit,
    pub columns: Vec<String>,
    pub word_counts: Vec<u64>,
    pub targets: Vec<String>,
    /// `gamma[t][c]`: overlap of column `c` against target `t`.
    pub gamma: Vec<Vec<f64>>,
    /// `ld_gain[t][c]`, present when evaluation records were supplied.
    pub ld_gain: Option<Vec<Vec<Option<f64>>>>,
}

/// Overlap of every chunk (or stage) against every target.
///
/// When `records` are given, a record whose source is a column label
/// (`chunk3`, `stage3`) and whose target names one of `targets` fills the
/// LD-Gain cell, provided it carries λ.
pub fn stage_overlap_report(
    dataset: &Dataset,
    plan: &ChunkPlan,
    targets: &[Dataset],
    unit: ReportUnit,
    scope: Scope,
    records: Option<&[AdaptationRecord]>,
) -> Result<StageReport> {
    if targets.is_empty() {
        return Err(Error::EmptyDataset("no target datasets".into()));
    }
    let (columns, word_counts): (Vec<String>, Vec<u64>) = match unit {
        ReportUnit::Chunk => (
            (0..plan.k).map(|i| unit.label(i)).collect(),
            plan.word_counts.clone(),
        ),
        ReportUnit::Stage => (
            (0..plan.k).map(|i| unit.label(i)).collect(),
            build_stages(plan)
                .iter()
                .map(|s| s.cumulative_word_count)
                .collect(),
        ),
    };
    let parts: Vec<Dataset> = (0..plan.k)
        .map(|i| match unit {
            ReportUnit::Chunk => chunk_dataset(dataset, plan, i),
            ReportUnit::Stage => stage_dataset(dataset, plan, i),
        })
        .collect();
    let overlap = cross_domain_overlap(&parts, targets, scope)?;
    let gamma: Vec<Vec<f64>> = (0..targets.len())
        .map(|t| (0..plan.k).map(|c| overlap.per_pair[c][t]).collect())
        .collect();

    let ld_gain = records.map(|recs| {
        let lookup: HashMap<(String, &str), f64> = recs
            .iter()
            .filter_map(|r| {
                r.ld_gain()
                    .map(|v| ((r.source_label(), r.target_name.as_str()), v))
            })
            .collect();
        targets
            .iter()
            .map(|t| {
                columns
                    .iter()
                    .map(|c| lookup.get(&(c.clone(), t.name.as_str())).copied())
                    .collect()
            })
            .collect()
    });

    Ok(StageReport {
        unit,
        columns,
        word_counts,
        targets: targets.iter().map(|t| t.name.clone()).collect(),
        gamma,
        ld_gain,
    })
}

impl StageReport {
    /// CSV in a chunk-table layout: a `word_count` row, then one `overlap`
    /// row per target (γ in percent), then `ld_gain` rows when available.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["row".to_owned(), "target".to_owned()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;

        let mut row = vec!["word_count".to_owned(), String::new()];
        row.extend(self.word_counts.iter().map(u64::to_string));
        w.write_record(&row)?;

        for (t, name) in self.targets.iter().enumerate() {
            let mut row = vec!["overlap_pct".to_owned(), name.clone()];
            row.extend(self.gamma[t].iter().map(|g| format!("{:.2}", g * 100.0)));
            w.write_record(&row)?;
        }
        if let Some(ld) = &self.ld_gain {
            for (t, name) in self.targets.iter().enumerate() {
                let mut row = vec!["ld_gain".to_owned(), name.clone()];
                row.extend(
                    ld[t]
                        .iter()
                        .map(|v| v.map(|x| format!("{x:.2}")).unwrap_or_default()),
                );
                w.write_record(&row)?;
            }
        }
        w.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{word_count, TokenizerConfig};

    fn dataset(n: usize) -> Dataset {
        let pairs: Vec<(String, String)> = (0..n)
            .map(|i| {
                (
                    format!("doc {i} {}", "w ".repeat(i % 5)),
                    format!("sum {i}"),
                )
            })
            .collect();
        Dataset::from_texts("d", "d", TokenizerConfig::default(), pairs).unwrap()
    }

    #[test]
    fn single_chunk_is_whole_dataset() {
        let ds = dataset(7);
        let plan = split_chunks(&ds, 1, 3, Scope::Both).unwrap();
        assert_eq!(plan.chunk_sizes(), vec![7]);
        assert_eq!(plan.word_counts[0], word_count(&ds, Scope::Both));
    }

    #[test]
    fn sizes_differ_by_at_most_one() {
        let plan = split_chunks(&dataset(10), 3, 0, Scope::Both).unwrap();
        assert_eq!(plan.chunk_sizes(), vec![4, 3, 3]);
    }

    #[test]
    fn k_out_of_range() {
        let ds = dataset(4);
        assert!(split_chunks(&ds, 0, 0, Scope::Both).is_err());
        assert!(split_chunks(&ds, 5, 0, Scope::Both).is_err());
    }

    #[test]
    fn stages_are_prefix_sums() {
        let plan = ChunkPlan {
            k: 3,
            seed: 0,
            scope: Scope::Both,
            chunk_ids: vec![vec![]; 3],
            word_counts: vec![5, 7, 3],
            members: vec![vec![]; 3],
        };
        let stages = build_stages(&plan);
        let cum: Vec<u64> = stages.iter().map(|s| s.cumulative_word_count).collect();
        assert_eq!(cum, vec![5, 12, 15]);
        assert_eq!(stages[2].member_chunks, vec![0, 1, 2]);
    }

    #[test]
    fn chunk_equal_to_target_has_full_overlap() {
        let ds = dataset(6);
        let plan = split_chunks(&ds, 2, 11, Scope::Both).unwrap();
        let target = chunk_dataset(&ds, &plan, 0);
        let report =
            stage_overlap_report(&ds, &plan, &[target], ReportUnit::Chunk, Scope::Both, None)
                .unwrap();
        assert_eq!(report.gamma[0][0], 1.0);
    }

    #[test]
    fn plan_json_has_ids_only() {
        let ds = dataset(4);
        let plan = split_chunks(&ds, 2, 1, Scope::Both).unwrap();
        let v = serde_json::to_value(&plan).unwrap();
        assert!(v.get("members").is_none());
        assert_eq!(v["chunk_ids"].as_array().unwrap().len(), 2);
    }
}
