//! Topic-vector similarity and word error rate.

use rayon::prelude::*;

use crate::confusion::{align, AlignmentOp};
use crate::lda::TopicVector;
use crate::pipeline::TopicPipeline;
use crate::{Error, Result};

/// Cosine of two topic vectors, clamped to `[0, 1]`.
pub fn cosine(a: &TopicVector, b: &TopicVector) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let dot: f64 = a.probs.iter().zip(&b.probs).map(|(x, y)| x * y).sum();
    let na: f64 = a.probs.iter().map(|x| x * x).sum();
    let nb: f64 = b.probs.iter().map(|x| x * x).sum();
    // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): exact 1.0 for a == b.
    Ok((dot / (na * nb).sqrt()).clamp(0.0, 1.0))
}

/// Cosine between the topic vectors of two raw documents.
pub fn similarity(d1: &str, d2: &str, pipeline: &TopicPipeline) -> Result<f64> {
    cosine(&pipeline.topic_vector(d1)?, &pipeline.topic_vector(d2)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSimilarity {
    pub mean: f64,
    pub stderr: f64,
    pub scores: Vec<f64>,
}

/// Arithmetic mean and standard error (sample deviation over sqrt(n)); the
/// standard error of fewer than two values is 0.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Mean positional similarity between two equally sized document sets.
pub fn corpus_similarity<A, B>(s1: &[A], s2: &[B], pipeline: &TopicPipeline) -> Result<CorpusSimilarity>
where
    A: AsRef<str> + Sync,
    B: AsRef<str> + Sync,
{
    if s1.len() != s2.len() {
        return Err(Error::SizeMismatch {
            left: s1.len(),
            right: s2.len(),
        });
    }
    if s1.is_empty() {
        return Err(Error::NoDocuments);
    }
    let scores = s1
        .par_iter()
        .zip(s2.par_iter())
        .map(|(a, b)| similarity(a.as_ref(), b.as_ref(), pipeline))
        .collect::<Result<Vec<_>>>()?;
    Ok(corpus_similarity_from_scores(scores))
}

pub fn corpus_similarity_from_scores(scores: Vec<f64>) -> CorpusSimilarity {
    let (mean, stderr) = mean_and_stderr(&scores);
    CorpusSimilarity {
        mean,
        stderr,
        scores,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WerBreakdown {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub ref_length: usize,
    pub wer: f64,
}

impl WerBreakdown {
    pub fn edits(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }
}

pub fn wer<S: AsRef<str>>(reference: &[S], hypothesis: &[S]) -> Result<WerBreakdown> {
    if reference.is_empty() {
        return Err(Error::EmptyReference);
    }
    let (mut s, mut d, mut i) = (0, 0, 0);
    for op in align(reference, hypothesis) {
        match op {
            AlignmentOp::Match(_) => {}
            AlignmentOp::Substitute { .. } => s += 1,
            AlignmentOp::Delete(_) => d += 1,
            AlignmentOp::Insert(_) => i += 1,
        }
    }
    Ok(WerBreakdown {
        substitutions: s,
        deletions: d,
        insertions: i,
        ref_length: reference.len(),
        wer: (s + d + i) as f64 / reference.len() as f64,
    })
}
