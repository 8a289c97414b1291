use std::collections::BTreeMap;

use crate::corpus::Episode;
use crate::harness::baseline_similarities;
use crate::pipeline::TopicPipeline;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Decile {
    pub episode_ids: Vec<String>,
    pub scores: Vec<f64>,
    pub unique_shows: usize,
    /// Most frequent show and its episode count; ties go to the smaller id.
    pub dominant_show: (String, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecileReport {
    pub deciles: Vec<Decile>,
}

impl DecileReport {
    pub fn unique_show_counts(&self) -> Vec<usize> {
        self.deciles.iter().map(|d| d.unique_shows).collect()
    }

    /// Buckets `(episode id, show id, score)` triples into ten near-equal
    /// groups by ascending score; the first `n % 10` buckets hold one extra.
    pub fn from_scored(mut scored: Vec<(String, String, f64)>) -> Result<Self> {
        let n = scored.len();
        if n < 10 {
            return Err(Error::TooFewEpisodes(n));
        }
        scored.sort_by(|a, b| a.2.total_cmp(&b.2).then_with(|| a.0.cmp(&b.0)));
        let (base, extra) = (n / 10, n % 10);
        let mut deciles = Vec::with_capacity(10);
        let mut iter = scored.into_iter();
        for d in 0..10 {
            let size = base + usize::from(d < extra);
            let bucket: Vec<_> = iter.by_ref().take(size).collect();
            let mut shows: BTreeMap<&str, usize> = BTreeMap::new();
            for (_, show, _) in &bucket {
                *shows.entry(show.as_str()).or_default() += 1;
            }
            let dominant = shows
                .iter()
                .fold(None::<(&str, usize)>, |best, (&s, &c)| match best {
                    Some((_, bc)) if bc >= c => best,
                    _ => Some((s, c)),
                })
                .map(|(s, c)| (s.to_string(), c))
                .unwrap_or_default();
            deciles.push(Decile {
                unique_shows: shows.len(),
                dominant_show: dominant,
                episode_ids: bucket.iter().map(|b| b.0.clone()).collect(),
                scores: bucket.iter().map(|b| b.2).collect(),
            });
        }
        Ok(Self { deciles })
    }
}

/// Deciles of the description/transcript baseline similarity.
pub fn decile_report(episodes: &[Episode], pipeline: &TopicPipeline) -> Result<DecileReport> {
    if episodes.len() < 10 {
        return Err(Error::TooFewEpisodes(episodes.len()));
    }
    let scores = baseline_similarities(episodes, pipeline)?;
    DecileReport::from_scored(
        episodes
            .iter()
            .zip(scores)
            .map(|(e, s)| (e.id.clone(), e.show_id.clone(), s))
            .collect(),
    )
}
