use rayon::prelude::*;

use crate::confusion::ConfusionModel;
use crate::corpus::Episode;
use crate::harness::{ExperimentKind, SweepConfig};
use crate::lda::TopicVector;
use crate::metrics::{cosine, mean_and_stderr, similarity, wer};
use crate::noise::{Injector, NoiseStrategy};
use crate::pipeline::TopicPipeline;
use crate::rng::{ChaCha8Rng, StreamKey};
use crate::Result;

#[derive(Debug, Clone)]
pub struct FilterReport {
    pub retained: Vec<Episode>,
    /// `(episode id, baseline similarity)` of every dropped episode.
    pub dropped: Vec<(String, f64)>,
    /// `(episode id, baseline similarity)` of every input episode.
    pub scores: Vec<(String, f64)>,
}

/// Similarity between each episode's extended description and its transcript.
pub fn baseline_similarities(episodes: &[Episode], pipeline: &TopicPipeline) -> Result<Vec<f64>> {
    episodes
        .par_iter()
        .map(|e| similarity(&e.extended_description(), &e.transcript, pipeline))
        .collect()
}

/// Keeps episodes whose baseline similarity is strictly above `threshold`.
pub fn filter_pairs(
    episodes: &[Episode],
    pipeline: &TopicPipeline,
    threshold: f64,
) -> Result<FilterReport> {
    let scores = baseline_similarities(episodes, pipeline)?;
    let mut report = FilterReport {
        retained: Vec::new(),
        dropped: Vec::new(),
        scores: Vec::with_capacity(episodes.len()),
    };
    for (e, &s) in episodes.iter().zip(&scores) {
        report.scores.push((e.id.clone(), s));
        if s > threshold {
            report.retained.push(e.clone());
        } else {
            report.dropped.push((e.id.clone(), s));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    pub strategy: NoiseStrategy,
    pub trial: usize,
    pub pair_id: String,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAggregate {
    pub beta: f64,
    pub strategy: NoiseStrategy,
    /// Mean over trials of the per-trial corpus similarity.
    pub mean_cs: f64,
    pub stderr: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<SweepAggregate>,
}

fn stream(
    tag: &str,
    cfg: &SweepConfig,
    strategy: NoiseStrategy,
    beta_idx: usize,
    trial: usize,
    episode: &str,
) -> ChaCha8Rng {
    StreamKey::new(cfg.master_seed)
        .with_str(tag)
        .with_str(strategy.as_str())
        .with_u64(beta_idx as u64)
        .with_u64(trial as u64)
        .with_str(episode)
        .rng()
}

fn tokens(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

/// Runs every (strategy, beta, trial) cell: injects noise into each
/// transcript and compares it with the clean side of the experiment.
pub fn run_sweep(
    episodes: &[Episode],
    pipeline: &TopicPipeline,
    confusion: Option<&ConfusionModel>,
    cfg: &SweepConfig,
) -> Result<SweepResult> {
    cfg.validate()?;
    let vocab = pipeline.dictionary.unigram_terms();
    let injectors = cfg
        .strategies
        .iter()
        .map(|&s| Injector::new(s, &vocab, confusion).map(|i| (s, i)))
        .collect::<Result<Vec<_>>>()?;

    let filtered;
    let episodes = match cfg.experiment {
        ExperimentKind::DescriptionVsNoisyTranscript => {
            filtered = filter_pairs(episodes, pipeline, cfg.filter_threshold)?.retained;
            &filtered[..]
        }
        ExperimentKind::RawVsNoisyTranscript => episodes,
    };
    if episodes.is_empty() {
        return Ok(SweepResult::default());
    }

    let clean: Vec<TopicVector> = episodes
        .par_iter()
        .map(|e| match cfg.experiment {
            ExperimentKind::DescriptionVsNoisyTranscript => {
                pipeline.topic_vector(&e.extended_description())
            }
            ExperimentKind::RawVsNoisyTranscript => pipeline.topic_vector(&e.transcript),
        })
        .collect::<Result<_>>()?;
    let raw: Vec<Vec<&str>> = episodes.iter().map(|e| tokens(&e.transcript)).collect();

    let mut cells = Vec::new();
    for (s_idx, _) in injectors.iter().enumerate() {
        for (b_idx, _) in cfg.beta_grid.iter().enumerate() {
            for trial in 0..cfg.trials {
                for e_idx in 0..episodes.len() {
                    cells.push((s_idx, b_idx, trial, e_idx));
                }
            }
        }
    }
    let rows = cells
        .into_par_iter()
        .map(|(s_idx, b_idx, trial, e_idx)| {
            let (strategy, injector) = injectors[s_idx];
            let beta = cfg.beta_grid[b_idx];
            let episode = &episodes[e_idx];
            let mut rng = stream("sweep", cfg, strategy, b_idx, trial, &episode.id);
            let noisy = injector.inject(&raw[e_idx], beta, &mut rng).join(" ");
            let similarity = cosine(&clean[e_idx], &pipeline.topic_vector(&noisy)?)?;
            Ok(SweepRow {
                beta,
                strategy,
                trial,
                pair_id: episode.id.clone(),
                similarity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let aggregates = aggregate_rows(&rows);
    Ok(SweepResult { rows, aggregates })
}

/// Groups rows by (strategy, beta) in first-seen order; each trial's corpus
/// similarity is the mean over its pairs in row order, and the aggregate is
/// the mean and standard error over trials.
pub fn aggregate_rows(rows: &[SweepRow]) -> Vec<SweepAggregate> {
    let mut groups: Vec<(NoiseStrategy, f64, Vec<(usize, Vec<f64>)>)> = Vec::new();
    for row in rows {
        let g = match groups
            .iter()
            .position(|(s, b, _)| *s == row.strategy && b.to_bits() == row.beta.to_bits())
        {
            Some(i) => i,
            None => {
                groups.push((row.strategy, row.beta, Vec::new()));
                groups.len() - 1
            }
        };
        let trials = &mut groups[g].2;
        match trials.iter().position(|(t, _)| *t == row.trial) {
            Some(i) => trials[i].1.push(row.similarity),
            None => trials.push((row.trial, vec![row.similarity])),
        }
    }
    groups
        .into_iter()
        .map(|(strategy, beta, trials)| {
            let per_trial: Vec<f64> = trials
                .iter()
                .map(|(_, v)| v.iter().sum::<f64>() / v.len() as f64)
                .collect();
            let (mean_cs, stderr) = mean_and_stderr(&per_trial);
            SweepAggregate {
                beta,
                strategy,
                mean_cs,
                stderr,
                n: per_trial.len(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WerPoint {
    pub beta: f64,
    pub strategy: NoiseStrategy,
    pub mean_wer: f64,
    pub stderr: f64,
    pub n: usize,
}

/// Word error rate of injected transcripts against the raw ones, averaged
/// over episodes within a trial, then over trials. Episodes with empty
/// transcripts have no defined WER and are skipped.
pub fn beta_wer_curve(
    episodes: &[Episode],
    vocab: &[String],
    confusion: Option<&ConfusionModel>,
    cfg: &SweepConfig,
) -> Result<Vec<WerPoint>> {
    cfg.validate()?;
    let usable: Vec<(&str, Vec<&str>)> = episodes
        .iter()
        .map(|e| (e.id.as_str(), tokens(&e.transcript)))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let mut out = Vec::new();
    for &strategy in &cfg.strategies {
        let injector = Injector::new(strategy, vocab, confusion)?;
        for (b_idx, &beta) in cfg.beta_grid.iter().enumerate() {
            if usable.is_empty() {
                continue;
            }
            let per_trial = (0..cfg.trials)
                .into_par_iter()
                .map(|trial| {
                    let mut total = 0.0;
                    for (id, raw) in &usable {
                        let mut rng = stream("wer", cfg, strategy, b_idx, trial, id);
                        let noisy = injector.inject(raw, beta, &mut rng);
                        let noisy: Vec<&str> = noisy.iter().map(String::as_str).collect();
                        total += wer(raw, &noisy)?.wer;
                    }
                    Ok(total / usable.len() as f64)
                })
                .collect::<Result<Vec<f64>>>()?;
            let (mean_wer, stderr) = mean_and_stderr(&per_trial);
            out.push(WerPoint {
                beta,
                strategy,
                mean_wer,
                stderr,
                n: per_trial.len(),
            });
        }
    }
    Ok(out)
}
