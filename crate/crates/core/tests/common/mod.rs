//! Synthetic corpora with known generating topics.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topic_noise::confusion::ConfusionModel;
use topic_noise::corpus::{BowVector, Episode};

const PREFIXES: [&str; 8] = ["sol", "hav", "krig", "mad", "fod", "kunst", "pen", "syg"];

/// Alphabetic word `index` of topic `topic`, stable under preprocessing.
pub fn word(topic: usize, index: usize) -> String {
    let a = (b'a' + (index / 26) as u8) as char;
    let b = (b'a' + (index % 26) as u8) as char;
    format!("{}{a}{b}", PREFIXES[topic])
}

pub fn topic_vocab(topic: usize, size: usize) -> Vec<String> {
    (0..size).map(|i| word(topic, i)).collect()
}

/// `tokens` words drawn uniformly from one topic's vocabulary.
pub fn topic_text(rng: &mut ChaCha8Rng, topic: usize, vocab: usize, tokens: usize) -> String {
    (0..tokens)
        .map(|_| word(topic, rng.random_range(0..vocab)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Bag-of-words documents from `topics` disjoint vocabularies of `vocab`
/// terms each; term id = topic * vocab + index. Returns documents and their
/// generating topic.
pub fn disjoint_bows(
    docs: usize,
    topics: usize,
    vocab: usize,
    tokens: usize,
    seed: u64,
) -> (Vec<BowVector>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bows = Vec::with_capacity(docs);
    let mut labels = Vec::with_capacity(docs);
    for d in 0..docs {
        let topic = d % topics;
        let mut counts = BTreeMap::new();
        for _ in 0..tokens {
            *counts.entry(topic * vocab + rng.random_range(0..vocab)).or_insert(0u32) += 1;
        }
        bows.push(BowVector {
            entries: counts.into_iter().collect(),
        });
        labels.push(topic);
    }
    (bows, labels)
}

/// Fraction of documents whose argmax topic agrees with the majority label
/// of that argmax topic.
pub fn purity(assigned: &[usize], labels: &[usize]) -> f64 {
    let mut table: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    for (&a, &l) in assigned.iter().zip(labels) {
        *table.entry(a).or_default().entry(l).or_default() += 1;
    }
    let hits: usize = table
        .values()
        .map(|m| m.values().copied().max().unwrap_or(0))
        .sum();
    hits as f64 / assigned.len() as f64
}

/// Training texts from `topics` topics, `per_topic` documents each.
pub fn training_texts(topics: usize, vocab: usize, per_topic: usize, tokens: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..topics * per_topic)
        .map(|d| topic_text(&mut rng, d % topics, vocab, tokens))
        .collect()
}

/// Episodes whose transcripts come from `topics` alternately; the extended
/// description is drawn from the same topic.
pub fn episodes(count: usize, topics: &[usize], vocab: usize, tokens: usize, seed: u64) -> Vec<Episode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let topic = topics[i % topics.len()];
            Episode {
                id: format!("ep{i:03}"),
                transcript: topic_text(&mut rng, topic, vocab, tokens),
                description: topic_text(&mut rng, topic, vocab, tokens / 4),
                episode_title: format!("afsnit {}", word(topic, 0)),
                show_id: format!("show{}", i % 3),
                show_title: String::new(),
                show_description: String::new(),
                category: String::new(),
            }
        })
        .collect()
}

/// Confusion model whose candidates for each word are other words of the
/// same topic, learned by accumulating synthetic reference/hypothesis pairs.
pub fn semantic_confusion(topics: &[usize], vocab: usize) -> ConfusionModel {
    let mut pairs = Vec::new();
    for &topic in topics {
        for i in 0..vocab {
            for (offset, repeats) in [(1usize, 5usize), (2, 3), (7, 1)] {
                let cand = word(topic, (i + offset) % vocab);
                for _ in 0..repeats {
                    pairs.push((vec![word(topic, i)], vec![cand.clone()]));
                }
            }
        }
    }
    ConfusionModel::accumulate(&pairs)
}
