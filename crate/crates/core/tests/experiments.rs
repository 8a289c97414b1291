mod common;

use topic_noise::coherence::{grid_search, GridSpec, VocabMode};
use topic_noise::confusion::ConfusionModel;
use topic_noise::corpus::{preprocess, BowVector, Dictionary, Episode, Lexicon, LexiconMode, PipelineConfig};
use topic_noise::harness::{
    beta_wer_curve, decile_report, filter_pairs, run_sweep, ExperimentKind, SweepConfig,
};
use topic_noise::lda::{self, TrainConfig};
use topic_noise::metrics::{corpus_similarity, similarity};
use topic_noise::noise::NoiseStrategy;
use topic_noise::pipeline::TopicPipeline;

const VOCAB: usize = 30;

fn permissive() -> PipelineConfig {
    PipelineConfig {
        lexicon_mode: LexiconMode::Permissive,
        ..Default::default()
    }
}

fn pipeline(topics: usize) -> TopicPipeline {
    let cfg = permissive();
    let lexicon = Lexicon::new();
    let texts = common::training_texts(topics, VOCAB, 60, 60, 11);
    let tokens: Vec<Vec<String>> = texts.iter().map(|t| preprocess(t, &lexicon, &cfg)).collect();
    let dictionary = Dictionary::build(&tokens, &cfg).unwrap();
    let bows: Vec<BowVector> = tokens.iter().map(|t| dictionary.vectorize(t)).collect();
    let train = TrainConfig {
        num_topics: topics,
        seed: 4,
        ..Default::default()
    };
    let model = lda::train(&bows, dictionary.len(), &train).unwrap();
    TopicPipeline::new(lexicon, cfg, dictionary, model, train.vb_iterations, train.gamma_threshold).unwrap()
}

/// Episodes whose descriptions talk about a different topic than the
/// transcript, for every `mismatch_every`-th episode.
fn mixed_episodes(count: usize, mismatch_every: usize) -> Vec<Episode> {
    let mut eps = common::episodes(count, &[0, 1], VOCAB, 80, 3);
    let other = common::episodes(count, &[1, 0], VOCAB, 80, 4);
    for (i, (e, o)) in eps.iter_mut().zip(other).enumerate() {
        if i % mismatch_every == 0 {
            e.description = o.description;
            e.episode_title = o.episode_title;
        }
    }
    eps
}

#[test]
fn similarity_examples() {
    let p = pipeline(2);
    let a = common::topic_vocab(0, VOCAB).join(" ");
    let b = common::topic_vocab(1, VOCAB).join(" ");
    assert_eq!(similarity(&a, &a, &p).unwrap(), 1.0);
    assert_eq!(similarity("", "", &p).unwrap(), 1.0);
    assert!(similarity(&a, &b, &p).unwrap() < 0.5);

    let eps = common::episodes(10, &[0, 1], VOCAB, 40, 9);
    let t: Vec<&str> = eps.iter().map(|e| e.transcript.as_str()).collect();
    let cs = corpus_similarity(&t, &t, &p).unwrap();
    assert_eq!(cs.mean, 1.0);
    assert_eq!(cs.stderr, 0.0);
    assert!(corpus_similarity(&t, &t[1..], &p).is_err());
}

#[test]
fn filtering_is_strict_and_total() {
    let p = pipeline(2);
    let eps = mixed_episodes(20, 4);
    let report = filter_pairs(&eps, &p, 0.5).unwrap();
    assert_eq!(report.scores.len(), 20);
    assert_eq!(report.retained.len() + report.dropped.len(), 20);
    for (i, (id, s)) in report.scores.iter().enumerate() {
        assert_eq!(id, &eps[i].id);
        let kept = report.retained.iter().any(|e| &e.id == id);
        assert_eq!(kept, *s > 0.5, "{id} {s}");
        assert_eq!(kept, i % 4 != 0, "{id} {s}");
    }

    // A threshold equal to a score drops that episode.
    let (pivot_id, pivot) = report.scores[1].clone();
    let at = filter_pairs(&eps, &p, pivot).unwrap();
    assert!(at.dropped.iter().any(|(id, _)| *id == pivot_id));
    assert!(filter_pairs(&eps, &p, pivot - 1e-12).unwrap().retained.iter().any(|e| e.id == pivot_id));

    let none = filter_pairs(&[], &p, 0.5).unwrap();
    assert!(none.retained.is_empty() && none.dropped.is_empty());
    let all = filter_pairs(&eps, &p, -1.0).unwrap();
    assert_eq!(all.retained.len(), 20);
}

#[test]
fn experiment_one_filters_and_decreases_with_uniform_noise() {
    let p = pipeline(2);
    let eps = mixed_episodes(20, 4);
    let confusion = common::semantic_confusion(&[0, 1], VOCAB);
    let cfg = SweepConfig {
        beta_grid: vec![0.0, 0.5, 1.0],
        trials: 5,
        master_seed: 9,
        ..Default::default()
    };
    let result = run_sweep(&eps, &p, Some(&confusion), &cfg).unwrap();
    assert_eq!(result.rows.len(), 2 * 3 * 5 * 15);
    assert!(result.rows.iter().all(|r| eps[..].iter().position(|e| e.id == r.pair_id).unwrap() % 4 != 0));
    let uniform: Vec<f64> = result
        .aggregates
        .iter()
        .filter(|a| a.strategy == NoiseStrategy::UniformVocab)
        .map(|a| a.mean_cs)
        .collect();
    assert!(uniform[0] > 0.9);
    assert!(uniform.windows(2).all(|w| w[1] <= w[0]), "{uniform:?}");
    assert_eq!(run_sweep(&eps, &p, Some(&confusion), &cfg).unwrap(), result);
}

#[test]
fn experiment_two_is_exact_at_zero_noise() {
    let p = pipeline(2);
    let eps = common::episodes(12, &[0, 1], VOCAB, 60, 2);
    let confusion = common::semantic_confusion(&[0, 1], VOCAB);
    let cfg = SweepConfig {
        beta_grid: vec![0.0, 0.3, 1.0],
        trials: 4,
        experiment: ExperimentKind::RawVsNoisyTranscript,
        ..Default::default()
    };
    let result = run_sweep(&eps, &p, Some(&confusion), &cfg).unwrap();
    for a in &result.aggregates {
        assert_eq!(a.n, 4);
        if a.beta == 0.0 {
            assert_eq!((a.mean_cs, a.stderr), (1.0, 0.0));
        }
    }
    for u in result.aggregates.iter().filter(|a| a.strategy == NoiseStrategy::UniformVocab) {
        let s = result
            .aggregates
            .iter()
            .find(|a| a.strategy == NoiseStrategy::StatisticsConfusion && a.beta == u.beta)
            .unwrap();
        assert!(s.mean_cs >= u.mean_cs, "beta {}: {} < {}", u.beta, s.mean_cs, u.mean_cs);
    }
}

#[test]
fn missing_confusion_model_is_reported() {
    let p = pipeline(2);
    let eps = common::episodes(10, &[0, 1], VOCAB, 20, 2);
    let cfg = SweepConfig::default();
    let err = run_sweep(&eps, &p, None, &cfg).unwrap_err();
    assert!(matches!(err, topic_noise::Error::MissingResource { .. }), "{err}");
}

#[test]
fn two_word_candidates_double_the_error_rate() {
    let eps = common::episodes(30, &[0], VOCAB, 100, 5);
    let pairs: Vec<(Vec<String>, Vec<String>)> = common::topic_vocab(0, VOCAB)
        .into_iter()
        .map(|w| (vec![w], vec!["ab".to_string(), "cd".to_string()]))
        .collect();
    let confusion = ConfusionModel::accumulate(&pairs);
    let cfg = SweepConfig {
        beta_grid: vec![0.0, 0.1, 0.2, 0.4],
        trials: 10,
        strategies: vec![NoiseStrategy::StatisticsConfusion],
        ..Default::default()
    };
    let curve = beta_wer_curve(&eps, &[], Some(&confusion), &cfg).unwrap();
    assert_eq!(curve.len(), 4);
    for p in curve {
        assert!((p.mean_wer - 2.0 * p.beta).abs() <= 0.03, "{p:?}");
    }
}

#[test]
fn deciles_rank_by_baseline_similarity() {
    let p = pipeline(2);
    let eps = mixed_episodes(47, 3);
    let report = decile_report(&eps, &p).unwrap();
    let sizes: Vec<usize> = report.deciles.iter().map(|d| d.episode_ids.len()).collect();
    assert_eq!(sizes, vec![5, 5, 5, 5, 5, 5, 5, 4, 4, 4]);
    let flat: Vec<f64> = report.deciles.iter().flat_map(|d| d.scores.clone()).collect();
    assert!(flat.windows(2).all(|w| w[0] <= w[1]));
    for d in &report.deciles {
        assert!(d.unique_shows >= 1 && d.unique_shows <= 3);
        assert!(d.dominant_show.1 >= d.episode_ids.len().div_ceil(3));
    }
    // The mismatched episodes form the lowest deciles.
    let low: Vec<&String> = report.deciles[..3].iter().flat_map(|d| &d.episode_ids).collect();
    let mismatched = eps.iter().enumerate().filter(|(i, _)| i % 3 == 0).count();
    assert_eq!(mismatched, 16);
    let hits = low
        .iter()
        .filter(|id| eps.iter().position(|e| &&e.id == *id).unwrap() % 3 == 0)
        .count();
    assert_eq!(hits, 15);
    assert!(decile_report(&eps[..9], &p).is_err());
}

#[test]
fn real_grid_search_prefers_the_generating_topic_count() {
    let docs = common::training_texts(3, 20, 40, 50, 6);
    let grid = GridSpec {
        topic_counts: vec![2, 3],
        vocab_modes: vec![VocabMode::Unigrams],
        vb_iteration_options: vec![10],
        top_m: 5,
    };
    let outcome = grid_search(&docs, &Lexicon::new(), &permissive(), &grid, &TrainConfig::default()).unwrap();
    assert_eq!(outcome.records.len(), 2);
    assert_eq!(outcome.best.num_topics, 3);
    for r in &outcome.records {
        assert_eq!(r.coherence.per_topic.len(), r.point.num_topics);
        assert!(r.coherence.aggregate.is_finite() && r.coherence.aggregate <= 0.0);
    }
}
