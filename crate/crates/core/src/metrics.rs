//! Dataset difficulty indicators, cross-domain word overlap, and gains.
//!
//! Conventions: ROUGE inside this module is on [0, 1] when it feeds the
//! abstraction level, and on the percent-point scale when it is an
//! externally supplied evaluation result (`rouge_base`, `rouge_finetuned`,
//! gain). γ is always a fraction on [0, 1].

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::corpus::{vocab, word_count, Dataset, Scope, Vocab};
use crate::error::{Error, Result};
use crate::rouge::RougeVariant;

/// Largest tolerated gap between a stored and a recomputed gain, in ROUGE points.
pub const GAIN_TOLERANCE: f64 = 0.005;

/// Which side of a sample plays the ROUGE candidate when scoring a document
/// against its own summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Candidate {
    #[default]
    Summary,
    Document,
}

impl FromStr for Candidate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "summary" => Ok(Candidate::Summary),
            "document" => Ok(Candidate::Document),
            other => Err(format!(
                "unknown candidate side {other:?} (expected summary or document)"
            )),
        }
    }
}

/// Unit of γ values read from or written to the outside world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaUnit {
    #[default]
    Fraction,
    Percent,
}

impl GammaUnit {
    pub fn to_fraction(self, value: f64) -> f64 {
        match self {
            GammaUnit::Fraction => value,
            GammaUnit::Percent => value / 100.0,
        }
    }

    pub fn from_fraction(self, gamma: f64) -> f64 {
        match self {
            GammaUnit::Fraction => gamma,
            GammaUnit::Percent => gamma * 100.0,
        }
    }

    /// Parses a γ cell. A trailing `%` forces percent regardless of `self`.
    pub fn parse_cell(self, cell: &str) -> Result<f64, String> {
        let cell = cell.trim();
        let (text, unit) = match cell.strip_suffix('%') {
            Some(rest) => (rest.trim(), GammaUnit::Percent),
            None => (cell, self),
        };
        let value: f64 = text
            .parse()
            .map_err(|_| format!("invalid gamma {cell:?}"))?;
        Ok(unit.to_fraction(value))
    }
}

impl fmt::Display for GammaUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GammaUnit::Fraction => "fraction",
            GammaUnit::Percent => "percent",
        })
    }
}

impl FromStr for GammaUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fraction" => Ok(GammaUnit::Fraction),
            "percent" => Ok(GammaUnit::Percent),
            other => Err(format!(
                "unknown gamma unit {other:?} (expected fraction or percent)"
            )),
        }
    }
}

fn require_non_empty(dataset: &Dataset) -> Result<()> {
    if dataset.is_empty() {
        Err(Error::EmptyDataset(dataset.name.clone()))
    } else {
        Ok(())
    }
}

/// α: mean over samples of document words / summary words.
///
/// This is the mean of per-sample ratios, not the ratio of totals.
pub fn compression_ratio(dataset: &Dataset) -> Result<f64> {
    require_non_empty(dataset)?;
    let ratios: Vec<f64> = dataset
        .samples()
        .par_iter()
        .map(|s| {
            let (d, m) = (s.document_words().len(), s.summary_words().len());
            if m == 0 {
                return Err(Error::DegenerateSample {
                    id: s.id.clone(),
                    side: "summary",
                });
            }
            Ok(d as f64 / m as f64)
        })
        .collect::<Result<_>>()?;
    Ok(ratios.iter().sum::<f64>() / ratios.len() as f64)
}

/// Mean document–summary ROUGE F1 on [0, 1].
pub fn mean_doc_summary_rouge(
    dataset: &Dataset,
    variant: RougeVariant,
    candidate: Candidate,
) -> Result<f64> {
    require_non_empty(dataset)?;
    let f1: Vec<f64> = dataset
        .samples()
        .par_iter()
        .map(|s| {
            let (doc, sum) = (s.document_words(), s.summary_words());
            match candidate {
                Candidate::Summary => variant.score(sum, doc).f1,
                Candidate::Document => variant.score(doc, sum).f1,
            }
        })
        .collect();
    Ok(f1.iter().sum::<f64>() / f1.len() as f64)
}

/// β: reciprocal of the mean document–summary ROUGE F1 (on [0, 1]).
pub fn abstraction_level(
    dataset: &Dataset,
    variant: RougeVariant,
    candidate: Candidate,
) -> Result<f64> {
    let mean = mean_doc_summary_rouge(dataset, variant, candidate)?;
    if mean <= 0.0 {
        return Err(Error::ZeroOverlap);
    }
    Ok(1.0 / mean)
}

/// λ = α·β.
pub fn learning_difficulty(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::out_of_range(
            "alpha",
            format!("{alpha} (must be > 0)"),
        ));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::out_of_range("beta", format!("{beta} (must be > 0)")));
    }
    Ok(alpha * beta)
}

/// Fine-tuned minus base ROUGE, in the scores' own unit. May be negative.
pub fn gain(rouge_base: f64, rouge_finetuned: f64) -> f64 {
    rouge_finetuned - rouge_base
}

/// LD-Gain = λ·gain.
pub fn ld_gain(lambda: f64, gain: f64) -> f64 {
    lambda * gain
}

/// Fraction of source tokens whose word occurs anywhere in the target.
///
/// Equal to Σ_k Count(w_k, S) / |S| over the unique target words w_k; here it
/// is computed by one pass over the source's frequency table.
pub fn pair_overlap(source: &Vocab, target: &Vocab) -> Result<f64> {
    if source.total() == 0 {
        return Err(Error::EmptyDataset("source has no tokens".into()));
    }
    let hits: u64 = source
        .counts()
        .iter()
        .filter(|(w, _)| target.contains(w))
        .map(|(_, &c)| c)
        .sum();
    Ok(hits as f64 / source.total() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapResult {
    pub gamma: f64,
    /// `per_pair[i][j]` is the overlap of source `i` against target `j`.
    pub per_pair: Vec<Vec<f64>>,
    pub sources: Vec<String>,
    pub targets: Vec<String>,
    pub n_sources: usize,
    pub m_targets: usize,
    pub scope: Scope,
}

/// γ: mean pair overlap over every (source, target) combination.
pub fn cross_domain_overlap(
    sources: &[Dataset],
    targets: &[Dataset],
    scope: Scope,
) -> Result<OverlapResult> {
    if sources.is_empty() || targets.is_empty() {
        return Err(Error::EmptyDataset(
            "need at least one source and one target".into(),
        ));
    }
    let build = |ds: &Dataset| -> Result<Vocab> {
        let v = vocab(ds, scope);
        if v.total() == 0 {
            Err(Error::EmptyDataset(format!(
                "{} has no words in scope {scope}",
                ds.name
            )))
        } else {
            Ok(v)
        }
    };
    let source_vocabs: Vec<Vocab> = sources.iter().map(build).collect::<Result<_>>()?;
    let target_vocabs: Vec<Vocab> = targets.iter().map(build).collect::<Result<_>>()?;

    let per_pair: Vec<Vec<f64>> = source_vocabs
        .par_iter()
        .map(|s| {
            target_vocabs
                .iter()
                .map(|t| pair_overlap(s, t))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let n = sources.len();
    let m = targets.len();
    let sum: f64 = per_pair.iter().flatten().sum();
    Ok(OverlapResult {
        gamma: sum / (n * m) as f64,
        per_pair,
        sources: sources.iter().map(|d| d.name.clone()).collect(),
        targets: targets.iter().map(|d| d.name.clone()).collect(),
        n_sources: n,
        m_targets: m,
        scope,
    })
}

/// α, β and word counts of one dataset. λ is always derived from α and β.
#[derive(Debug, Clone, PartialEq)]
pub struct DifficultyReport {
    pub name: String,
    pub alpha: f64,
    pub beta: f64,
    pub n_samples: usize,
    pub rouge_variant: RougeVariant,
    pub word_count_docs: u64,
    pub word_count_sums: u64,
}

impl DifficultyReport {
    pub fn compute(dataset: &Dataset, variant: RougeVariant, candidate: Candidate) -> Result<Self> {
        let alpha = compression_ratio(dataset)?;
        let beta = abstraction_level(dataset, variant, candidate)?;
        Ok(DifficultyReport {
            name: dataset.name.clone(),
            alpha,
            beta,
            n_samples: dataset.len(),
            rouge_variant: variant,
            word_count_docs: word_count(dataset, Scope::Documents),
            word_count_sums: word_count(dataset, Scope::Summaries),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.alpha * self.beta
    }
}

impl Serialize for DifficultyReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("DifficultyReport", 8)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("alpha", &self.alpha)?;
        st.serialize_field("beta", &self.beta)?;
        st.serialize_field("lambda", &self.lambda())?;
        st.serialize_field("n_samples", &self.n_samples)?;
        st.serialize_field("rouge_variant", &self.rouge_variant)?;
        st.serialize_field("word_count_docs", &self.word_count_docs)?;
        st.serialize_field("word_count_sums", &self.word_count_sums)?;
        st.end()
    }
}

/// One adaptation experiment: training on `source_names`, evaluating on `target_name`.
///
/// ROUGE values are percent points. `gamma` and `lambda` may be absent until
/// filled from datasets with [`fill_records`].
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptationRecord {
    pub source_names: Vec<String>,
    pub target_name: String,
    pub gamma: Option<f64>,
    pub lambda: Option<f64>,
    pub rouge_base: f64,
    pub rouge_finetuned: f64,
}

impl AdaptationRecord {
    pub fn gain(&self) -> f64 {
        gain(self.rouge_base, self.rouge_finetuned)
    }

    pub fn ld_gain(&self) -> Option<f64> {
        self.lambda.map(|l| ld_gain(l, self.gain()))
    }

    pub fn source_label(&self) -> String {
        self.source_names.join("+")
    }
}

impl Serialize for AdaptationRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("AdaptationRecord", 8)?;
        st.serialize_field("source_names", &self.source_names)?;
        st.serialize_field("target_name", &self.target_name)?;
        st.serialize_field("gamma", &self.gamma)?;
        st.serialize_field("lambda", &self.lambda)?;
        st.serialize_field("rouge_base", &self.rouge_base)?;
        st.serialize_field("rouge_finetuned", &self.rouge_finetuned)?;
        st.serialize_field("gain", &self.gain())?;
        st.serialize_field("ld_gain", &self.ld_gain())?;
        st.end()
    }
}

#[derive(Debug, Deserialize)]
struct RecordRow {
    source: String,
    target: String,
    #[serde(default)]
    gamma: Option<String>,
    #[serde(default)]
    lambda: Option<String>,
    rouge_base: String,
    rouge_finetuned: String,
    #[serde(default)]
    gain: Option<String>,
    #[serde(default)]
    ld_gain: Option<String>,
}

fn present(cell: &Option<String>) -> Option<&str> {
    cell.as_deref().map(str::trim).filter(|c| !c.is_empty())
}

fn parse_num(index: usize, field: &str, cell: &str) -> Result<f64> {
    cell.trim().parse().map_err(|_| Error::InvalidRecord {
        index,
        message: format!("invalid {field} {cell:?}"),
    })
}

/// Reads an evaluation-results CSV.
///
/// Required columns: `source`, `target`, `rouge_base`, `rouge_finetuned`.
/// Optional: `gamma` (in `gamma_unit`, or with a `%` suffix), `lambda`,
/// `gain`, `ld_gain`. Multiple training domains are joined with `+` in
/// `source`. Stored `gain` / `ld_gain` are checked against recomputed values;
/// records are numbered from 1 in errors.
pub fn read_records<R: Read>(reader: R, gamma_unit: GammaUnit) -> Result<Vec<AdaptationRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<RecordRow>().enumerate() {
        let index = i + 1;
        let row = row?;
        let invalid = |message: String| Error::InvalidRecord { index, message };

        let source_names: Vec<String> = row
            .source
            .split('+')
            .map(|s| s.trim().to_owned())
            .filter(|s| !s.is_empty())
            .collect();
        if source_names.is_empty() || row.target.is_empty() {
            return Err(invalid("empty source or target".into()));
        }
        let gamma = present(&row.gamma)
            .map(|c| gamma_unit.parse_cell(c).map_err(&invalid))
            .transpose()?;
        if let Some(g) = gamma {
            if !(0.0..=1.0).contains(&g) {
                return Err(invalid(format!("gamma {g} outside [0, 1]")));
            }
        }
        let lambda = present(&row.lambda)
            .map(|c| parse_num(index, "lambda", c))
            .transpose()?;
        if let Some(l) = lambda {
            if l.is_nan() || l <= 0.0 {
                return Err(invalid(format!("lambda {l} must be > 0")));
            }
        }
        let record = AdaptationRecord {
            source_names,
            target_name: row.target,
            gamma,
            lambda,
            rouge_base: parse_num(index, "rouge_base", &row.rouge_base)?,
            rouge_finetuned: parse_num(index, "rouge_finetuned", &row.rouge_finetuned)?,
        };
        if let Some(c) = present(&row.gain) {
            let stored = parse_num(index, "gain", c)?;
            if (stored - record.gain()).abs() > GAIN_TOLERANCE + 1e-9 {
                return Err(invalid(format!(
                    "stored gain {stored} != rouge_finetuned - rouge_base = {}",
                    record.gain()
                )));
            }
        }
        if let (Some(c), Some(l)) = (present(&row.ld_gain), lambda) {
            let stored = parse_num(index, "ld_gain", c)?;
            let expected = ld_gain(l, record.gain());
            // gain itself is only known to GAIN_TOLERANCE, so the bound scales with λ.
            let tol = GAIN_TOLERANCE * (1.0 + l) + 1e-9;
            if (stored - expected).abs() > tol {
                return Err(invalid(format!(
                    "stored ld_gain {stored} != lambda * gain = {expected}"
                )));
            }
        }
        out.push(record);
    }
    Ok(out)
}

/// Writes records in the evaluation CSV layout with derived columns filled in.
/// γ is written in `gamma_unit`.
pub fn write_records<W: Write>(
    writer: W,
    records: &[AdaptationRecord],
    gamma_unit: GammaUnit,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "source",
        "target",
        "gamma",
        "lambda",
        "rouge_base",
        "rouge_finetuned",
        "gain",
        "ld_gain",
    ])?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        w.write_record([
            r.source_label(),
            r.target_name.clone(),
            opt(r.gamma.map(|g| gamma_unit.from_fraction(g))),
            opt(r.lambda),
            r.rouge_base.to_string(),
            r.rouge_finetuned.to_string(),
            r.gain().to_string(),
            opt(r.ld_gain()),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

/// Settings used when computing γ and λ from datasets.
#[derive(Debug, Clone, Copy, Default)]
pub struct FillSettings {
    pub scope: Scope,
    pub variant: RougeVariant,
    pub candidate: Candidate,
}

/// Fills missing γ (sources vs target) and λ (of the target) from `datasets`,
/// matched by dataset name. Values already present are kept. Records naming
/// datasets that were not supplied are left as they are.
pub fn fill_records(
    records: &mut [AdaptationRecord],
    datasets: &[Dataset],
    settings: FillSettings,
) -> Result<()> {
    let by_name: HashMap<&str, &Dataset> = datasets.iter().map(|d| (d.name.as_str(), d)).collect();
    let mut lambdas: HashMap<String, f64> = HashMap::new();
    for r in records.iter_mut() {
        if r.lambda.is_none() {
            if let Some(target) = by_name.get(r.target_name.as_str()) {
                let lambda = match lambdas.get(&r.target_name) {
                    Some(&l) => l,
                    None => {
                        let l = DifficultyReport::compute(
                            target,
                            settings.variant,
                            settings.candidate,
                        )?
                        .lambda();
                        lambdas.insert(r.target_name.clone(), l);
                        l
                    }
                };
                r.lambda = Some(lambda);
            }
        }
        if r.gamma.is_none() {
            let target = by_name.get(r.target_name.as_str());
            let sources: Option<Vec<Dataset>> = r
                .source_names
                .iter()
                .map(|n| by_name.get(n.as_str()).map(|d| (*d).clone()))
                .collect();
            if let (Some(target), Some(sources)) = (target, sources) {
                let result =
                    cross_domain_overlap(&sources, std::slice::from_ref(*target), settings.scope)?;
                r.gamma = Some(result.gamma);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TokenizerConfig;
    use approx::assert_relative_eq;

    fn ds(name: &str, pairs: &[(&str, &str)]) -> Dataset {
        Dataset::from_texts(
            name,
            name,
            TokenizerConfig::default(),
            pairs.iter().copied(),
        )
        .unwrap()
    }

    #[test]
    fn compression_ratio_is_mean_of_ratios() {
        let d = ds(
            "x",
            &[("a a a a a a a a a a", "b b"), ("c c c c c c", "d d d")],
        );
        assert_eq!(compression_ratio(&d).unwrap(), 3.5);
        let same = ds("s", &[("one two", "one two"), ("x", "x")]);
        assert_eq!(compression_ratio(&same).unwrap(), 1.0);
        assert!(compression_ratio(&ds("e", &[])).is_err());
    }

    #[test]
    fn abstraction_level_identity_and_zero() {
        let same = ds("s", &[("one two three", "one two three")]);
        assert_eq!(
            abstraction_level(&same, RougeVariant::L, Candidate::Summary).unwrap(),
            1.0
        );
        let disjoint = ds("d", &[("a b c", "x y")]);
        assert!(matches!(
            abstraction_level(&disjoint, RougeVariant::L, Candidate::Summary),
            Err(Error::ZeroOverlap)
        ));
    }

    #[test]
    fn abstraction_level_from_two_pairs() {
        // F1 = 0.5 for (["a","x"], ["a","y"]); F1 = 0.25 for 1-of-4 vs 1-of-4.
        let d = ds("p", &[("a y", "a x"), ("a b c d", "a q r s")]);
        let beta = abstraction_level(&d, RougeVariant::L, Candidate::Summary).unwrap();
        assert_relative_eq!(beta, 1.0 / 0.375, max_relative = 1e-12);
    }

    #[test]
    fn learning_difficulty_table_values() {
        assert!((learning_difficulty(12.95, 20.22).unwrap() - 261.85).abs() <= 0.005);
        assert!((learning_difficulty(7.08, 13.13).unwrap() - 92.96).abs() <= 0.005);
        assert_eq!(learning_difficulty(1.0, 1.0).unwrap(), 1.0);
        assert!(learning_difficulty(0.0, 1.0).is_err());
        assert!(learning_difficulty(1.0, -2.0).is_err());
    }

    #[test]
    fn gain_and_ld_gain_table_values() {
        assert!((gain(8.10, 10.23) - 2.13).abs() < 1e-9);
        assert!((gain(7.42, 6.42) + 1.00).abs() < 1e-9);
        assert_eq!(gain(3.3, 3.3), 0.0);
        assert!((ld_gain(261.85, 2.13) - 557.74).abs() <= 0.01);
        assert!((ld_gain(261.85, -0.26) + 68.08).abs() <= 0.01);
        assert_eq!(ld_gain(261.85, 0.0), 0.0);
    }

    #[test]
    fn pair_overlap_examples() {
        let s = Vocab::from_words(["a", "b", "a", "c"]);
        let t = Vocab::from_words(["a", "c", "d"]);
        assert_eq!(pair_overlap(&s, &t).unwrap(), 0.75);
        assert_eq!(pair_overlap(&s, &Vocab::from_words(["z"])).unwrap(), 0.0);
        assert_eq!(pair_overlap(&s, &s).unwrap(), 1.0);
        assert!(pair_overlap(&Vocab::default(), &t).is_err());
    }

    #[test]
    fn cross_domain_overlap_examples() {
        let src = ds("s", &[("a b", "a c")]);
        let t1 = ds("t1", &[("a c", "d")]);
        let t2 = ds("t2", &[("b", "b")]);
        let r = cross_domain_overlap(std::slice::from_ref(&src), &[t1, t2], Scope::Both).unwrap();
        assert_eq!(r.per_pair, vec![vec![0.75, 0.25]]);
        assert_eq!(r.gamma, 0.5);
        let own = cross_domain_overlap(
            std::slice::from_ref(&src),
            std::slice::from_ref(&src),
            Scope::Both,
        )
        .unwrap();
        assert_eq!(own.gamma, 1.0);
    }

    #[test]
    fn overlap_is_asymmetric() {
        let x = ds("x", &[("a a a b", "a")]);
        let y = ds("y", &[("a c d e", "f")]);
        let xy = cross_domain_overlap(
            std::slice::from_ref(&x),
            std::slice::from_ref(&y),
            Scope::Both,
        )
        .unwrap()
        .gamma;
        let yx = cross_domain_overlap(&[y], &[x], Scope::Both).unwrap().gamma;
        assert_eq!(xy, 0.8);
        assert_eq!(yx, 0.2);
    }

    #[test]
    fn difficulty_report_serializes_lambda() {
        let d = ds("x", &[("a b c d", "a b")]);
        let r = DifficultyReport::compute(&d, RougeVariant::L, Candidate::Summary).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["lambda"].as_f64().unwrap(), r.alpha * r.beta);
        assert_eq!(v["rouge_variant"], "l");
    }

    #[test]
    fn read_records_validates_and_parses_units() {
        let csv = "source,target,gamma,rouge_base,rouge_finetuned,gain\n\
                   SAMSum,CNNDM,8.89%,8.10,10.23,2.13\n\
                   PubMed+WikiHow,CNNDM,0.0235,8.10,7.84,\n";
        let recs = read_records(csv.as_bytes(), GammaUnit::Fraction).unwrap();
        assert_eq!(recs.len(), 2);
        assert!((recs[0].gamma.unwrap() - 0.0889).abs() < 1e-12);
        assert_eq!(recs[1].source_names, vec!["PubMed", "WikiHow"]);
        assert!(recs[1].lambda.is_none());

        let bad = "source,target,rouge_base,rouge_finetuned,gain\nA,B,1.0,2.0,1.5\n";
        assert!(matches!(
            read_records(bad.as_bytes(), GammaUnit::Fraction),
            Err(Error::InvalidRecord { index: 1, .. })
        ));
        let percent = "source,target,gamma,rouge_base,rouge_finetuned\nA,B,8.89,1,2\n";
        let r = read_records(percent.as_bytes(), GammaUnit::Percent).unwrap();
        assert!((r[0].gamma.unwrap() - 0.0889).abs() < 1e-12);
        assert!(read_records(percent.as_bytes(), GammaUnit::Fraction).is_err());
    }

    #[test]
    fn ld_gain_check_tolerates_rounded_gain() {
        // Base 6.348, fine-tuned 7.38: the table rounds the gain to 1.03 before multiplying.
        let csv = "source,target,lambda,rouge_base,rouge_finetuned,gain,ld_gain\n\
                   PubMed,CNNDM,261.85,6.348,7.38,1.03,269.71\n";
        assert!(read_records(csv.as_bytes(), GammaUnit::Fraction).is_ok());
        let wrong = "source,target,lambda,rouge_base,rouge_finetuned,ld_gain\nA,B,10,1,2,12\n";
        assert!(read_records(wrong.as_bytes(), GammaUnit::Fraction).is_err());
    }

    #[test]
    fn fill_records_from_datasets() {
        let a = ds("A", &[("x y z", "x y")]);
        let b = ds("B", &[("x q r s", "x")]);
        let mut recs = vec![AdaptationRecord {
            source_names: vec!["A".into()],
            target_name: "B".into(),
            gamma: None,
            lambda: None,
            rouge_base: 1.0,
            rouge_finetuned: 2.0,
        }];
        fill_records(&mut recs, &[a.clone(), b.clone()], FillSettings::default()).unwrap();
        let expected_gamma = cross_domain_overlap(&[a], std::slice::from_ref(&b), Scope::Both)
            .unwrap()
            .gamma;
        let expected_lambda = DifficultyReport::compute(&b, RougeVariant::L, Candidate::Summary)
            .unwrap()
            .lambda();
        assert_eq!(recs[0].gamma, Some(expected_gamma));
        assert_eq!(recs[0].lambda, Some(expected_lambda));
    }
}
