//! U_mass topic coherence and coherence-driven grid search.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{preprocess, BowVector, Dictionary, Lexicon, PipelineConfig};
use crate::lda::{self, LdaModel, TrainConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceResult {
    pub per_topic: Vec<f64>,
    pub aggregate: f64,
}

impl CoherenceResult {
    pub fn from_scores(per_topic: Vec<f64>) -> Self {
        let aggregate = if per_topic.is_empty() {
            0.0
        } else {
            per_topic.iter().sum::<f64>() / per_topic.len() as f64
        };
        Self {
            per_topic,
            aggregate,
        }
    }
}

/// U_mass score of one ranked word list:
/// `sum_{m=2..M} sum_{l<m} ln((D(w_m, w_l) + 1) / D(w_l))` over full-document
/// co-occurrence in `bows`.
pub fn umass_for_list(words: &[usize], bows: &[BowVector]) -> Result<f64> {
    let m = words.len();
    let mut single = vec![0u64; m];
    let mut pair = vec![0u64; m * m];
    let mut present = vec![false; m];
    for bow in bows {
        for (i, &w) in words.iter().enumerate() {
            present[i] = bow.contains(w);
            if present[i] {
                single[i] += 1;
            }
        }
        for i in 0..m {
            if !present[i] {
                continue;
            }
            for j in 0..i {
                if present[j] {
                    pair[i * m + j] += 1;
                }
            }
        }
    }
    let mut score = 0.0;
    for i in 1..m {
        for j in 0..i {
            if single[j] == 0 {
                return Err(Error::ZeroDocumentFrequency(format!("term id {}", words[j])));
            }
            score += ((pair[i * m + j] + 1) as f64 / single[j] as f64).ln();
        }
    }
    Ok(score)
}

/// Per-topic U_mass over each topic's `top_m` highest-weight terms.
pub fn umass(model: &LdaModel, bows: &[BowVector], top_m: usize) -> Result<CoherenceResult> {
    if top_m < 2 {
        return Err(Error::InvalidConfig(format!("top_m must be at least 2, got {top_m}")));
    }
    let m = top_m.min(model.vocab_size());
    let per_topic = (0..model.num_topics())
        .into_par_iter()
        .map(|k| umass_for_list(&model.top_words(k, m), bows))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoherenceResult::from_scores(per_topic))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VocabMode {
    Unigrams,
    UnigramsBigrams,
}

impl VocabMode {
    pub fn uses_bigrams(self) -> bool {
        self == VocabMode::UnigramsBigrams
    }
}

impl fmt::Display for VocabMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VocabMode::Unigrams => "unigrams",
            VocabMode::UnigramsBigrams => "unigrams_bigrams",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    pub topic_counts: Vec<usize>,
    pub vocab_modes: Vec<VocabMode>,
    pub vb_iteration_options: Vec<usize>,
    pub top_m: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            topic_counts: (1..=10).map(|i| i * 10).collect(),
            vocab_modes: vec![VocabMode::Unigrams, VocabMode::UnigramsBigrams],
            vb_iteration_options: vec![5, 10, 15, 20],
            top_m: 10,
        }
    }
}

/// Field order is the tie-break order: fewer topics, unigrams, fewer
/// iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPoint {
    pub num_topics: usize,
    pub vocab_mode: VocabMode,
    pub vb_iterations: usize,
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(topics={}, {}, vb_iterations={})",
            self.num_topics, self.vocab_mode, self.vb_iterations
        )
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for &num_topics in &self.topic_counts {
            for &vocab_mode in &self.vocab_modes {
                for &vb_iterations in &self.vb_iteration_options {
                    out.push(GridPoint {
                        num_topics,
                        vocab_mode,
                        vb_iterations,
                    });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.topic_counts.is_empty()
            || self.vocab_modes.is_empty()
            || self.vb_iteration_options.is_empty()
        {
            return Err(Error::InvalidConfig("grid has an empty axis".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GridRecord {
    pub point: GridPoint,
    pub coherence: CoherenceResult,
    pub train_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct GridOutcome {
    pub best: GridPoint,
    pub records: Vec<GridRecord>,
}

/// Evaluates every grid point with `evaluate` and picks the maximum
/// aggregate coherence. Equal aggregates go to the smaller [`GridPoint`].
pub fn grid_search_with<F>(grid: &GridSpec, evaluate: F) -> Result<GridOutcome>
where
    F: Fn(&GridPoint) -> Result<CoherenceResult> + Sync,
{
    grid.validate()?;
    let records = grid
        .points()
        .into_par_iter()
        .map(|point| {
            let start = Instant::now();
            let coherence = evaluate(&point).map_err(|e| Error::GridPoint {
                point: point.to_string(),
                source: Box::new(e),
            })?;
            Ok(GridRecord {
                point,
                coherence,
                train_seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = records
        .iter()
        .fold(None::<&GridRecord>, |best, r| match best {
            None => Some(r),
            Some(b) => {
                let better = r.coherence.aggregate > b.coherence.aggregate
                    || (r.coherence.aggregate == b.coherence.aggregate && r.point < b.point);
                Some(if better { r } else { b })
            }
        })
        .expect("grid is nonempty")
        .point;
    Ok(GridOutcome { best, records })
}

/// Trains one model per grid point on `docs` and scores it by U_mass on the
/// same corpus. The dictionary is rebuilt per vocabulary mode.
pub fn grid_search(
    docs: &[String],
    lexicon: &Lexicon,
    pipeline: &PipelineConfig,
    grid: &GridSpec,
    base: &TrainConfig,
) -> Result<GridOutcome> {
    grid.validate()?;
    let mut prepared: Vec<(VocabMode, Result<(Dictionary, Vec<BowVector>)>)> = Vec::new();
    for &mode in &grid.vocab_modes {
        if prepared.iter().any(|(m, _)| *m == mode) {
            continue;
        }
        let cfg = PipelineConfig {
            use_bigrams: mode.uses_bigrams(),
            ..pipeline.clone()
        };
        let tokens: Vec<Vec<String>> = docs
            .par_iter()
            .map(|d| preprocess(d, lexicon, &cfg))
            .collect();
        let built = Dictionary::build(&tokens, &cfg).map(|dict| {
            let bows = tokens.iter().map(|t| dict.vectorize(t)).collect();
            (dict, bows)
        });
        prepared.push((mode, built));
    }
    grid_search_with(grid, |point| {
        let (dict, bows) = match &prepared.iter().find(|(m, _)| *m == point.vocab_mode) {
            Some((_, Ok(pair))) => pair,
            Some((_, Err(e))) => return Err(Error::InvalidConfig(e.to_string())),
            None => unreachable!("every mode is prepared"),
        };
        let cfg = TrainConfig {
            num_topics: point.num_topics,
            vb_iterations: point.vb_iterations,
            alpha: None,
            ..base.clone()
        };
        let model = lda::train(bows, dict.len(), &cfg)?;
        umass(&model, bows, grid.top_m)
    })
}

pub fn write_grid_report<W: Write>(outcome: &GridOutcome, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["topics", "vocab_mode", "vb_iterations", "aggregate_umass", "train_seconds"])?;
    for r in &outcome.records {
        w.write_record([
            r.point.num_topics.to_string(),
            r.point.vocab_mode.to_string(),
            r.point.vb_iterations.to_string(),
            r.coherence.aggregate.to_string(),
            r.train_seconds.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<grid report>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bow(ids: &[usize]) -> BowVector {
        BowVector {
            entries: ids.iter().map(|&i| (i, 1)).collect(),
        }
    }

    // a = 0, b = 1, c = 2
    fn abc_docs() -> Vec<BowVector> {
        vec![bow(&[0, 1]), bow(&[0, 1, 2]), bow(&[0])]
    }

    #[test]
    fn two_word_lists() {
        assert_eq!(umass_for_list(&[0, 1], &abc_docs()).unwrap(), 0.0);
        let s = umass_for_list(&[1, 0], &abc_docs()).unwrap();
        assert!((s - 1.5f64.ln()).abs() < 1e-15);
        assert!((s - 0.405465).abs() < 1e-6);
    }

    #[test]
    fn zero_frequency_is_an_error() {
        assert!(matches!(
            umass_for_list(&[5, 0], &abc_docs()),
            Err(Error::ZeroDocumentFrequency(_))
        ));
    }

    #[test]
    fn single_topic_aggregate() {
        let m = LdaModel::from_lambda(1, 1.0, 0.1, 3, vec![3.0, 2.0, 0.5]).unwrap();
        let r = umass(&m, &abc_docs(), 2).unwrap();
        assert_eq!(r.per_topic.len(), 1);
        assert_eq!(r.aggregate, r.per_topic[0]);
        assert!(umass(&m, &abc_docs(), 1).is_err());
    }

    #[test]
    fn default_grid_contains_reported_winner() {
        let winner = GridPoint {
            num_topics: 30,
            vocab_mode: VocabMode::Unigrams,
            vb_iterations: 20,
        };
        let points = GridSpec::default().points();
        assert_eq!(points.len(), 80);
        assert!(points.contains(&winner));
    }

    #[test]
    fn singleton_grid_and_tie_break() {
        let grid = GridSpec {
            topic_counts: vec![10],
            vocab_modes: vec![VocabMode::Unigrams],
            vb_iteration_options: vec![5],
            top_m: 10,
        };
        let out = grid_search_with(&grid, |_| Ok(CoherenceResult::from_scores(vec![-1.0]))).unwrap();
        assert_eq!(out.best.num_topics, 10);

        let grid = GridSpec {
            topic_counts: vec![20, 10],
            ..grid
        };
        let out = grid_search_with(&grid, |_| Ok(CoherenceResult::from_scores(vec![-2.0]))).unwrap();
        assert_eq!(out.best.num_topics, 10);
    }

    #[test]
    fn grid_errors_name_the_point() {
        let grid = GridSpec {
            topic_counts: vec![10],
            vocab_modes: vec![VocabMode::Unigrams],
            vb_iteration_options: vec![5],
            top_m: 10,
        };
        let err = grid_search_with(&grid, |_| Err(Error::EmptyCorpus)).unwrap_err();
        assert!(err.to_string().contains("topics=10"), "{err}");
        let empty = GridSpec {
            topic_counts: vec![],
            ..grid
        };
        assert!(grid_search_with(&empty, |_| unreachable!()).is_err());
    }
}
