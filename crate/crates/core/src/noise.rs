//! Substitution noise at rate beta.
//!
//! Each token independently undergoes a substitution attempt with probability
//! beta. A uniform substitution draws any single-word term of the topic-model
//! vocabulary; a confusion substitution draws from the word's learned
//! candidate distribution and removes words the confusion model has never
//! seen.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::confusion::{ConfusionModel, Draw};
use crate::rng::{ChaCha8Rng, StreamKey};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseStrategy {
    UniformVocab,
    StatisticsConfusion,
}

impl NoiseStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseStrategy::UniformVocab => "uniform_vocab",
            NoiseStrategy::StatisticsConfusion => "statistics_confusion",
        }
    }
}

impl fmt::Display for NoiseStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for NoiseStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform_vocab" | "uniform" => Ok(NoiseStrategy::UniformVocab),
            "statistics_confusion" | "statistics" => Ok(NoiseStrategy::StatisticsConfusion),
            other => Err(Error::InvalidConfig(format!("unknown noise strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub beta: f64,
    pub strategy: NoiseStrategy,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        validate_beta(self.beta)
    }

    /// Stream for one document under this spec.
    pub fn rng_for(&self, doc_id: &str) -> ChaCha8Rng {
        StreamKey::new(self.seed)
            .with_str("inject")
            .with_str(self.strategy.as_str())
            .with_u64(self.beta.to_bits())
            .with_str(doc_id)
            .rng()
    }
}

pub(crate) fn validate_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("beta must lie in [0, 1], got {beta}")))
    }
}

/// A validated source of replacement words.
#[derive(Debug, Clone, Copy)]
pub enum Injector<'a> {
    Uniform(&'a [String]),
    Confusion(&'a ConfusionModel),
}

impl<'a> Injector<'a> {
    /// `vocab` must be nonempty for the uniform strategy; the confusion
    /// strategy needs a model.
    pub fn new(
        strategy: NoiseStrategy,
        vocab: &'a [String],
        confusion: Option<&'a ConfusionModel>,
    ) -> Result<Self> {
        match strategy {
            NoiseStrategy::UniformVocab if vocab.is_empty() => Err(Error::MissingResource {
                strategy: "uniform_vocab",
                what: "a nonempty vocabulary",
            }),
            NoiseStrategy::UniformVocab => Ok(Injector::Uniform(vocab)),
            NoiseStrategy::StatisticsConfusion => confusion
                .map(Injector::Confusion)
                .ok_or(Error::MissingResource {
                    strategy: "statistics_confusion",
                    what: "a confusion model",
                }),
        }
    }

    pub fn inject<S, R>(&self, tokens: &[S], beta: f64, rng: &mut R) -> Vec<String>
    where
        S: AsRef<str>,
        R: Rng + ?Sized,
    {
        let mut out = Vec::with_capacity(tokens.len());
        for token in tokens {
            let token = token.as_ref();
            if !(rng.random::<f64>() < beta) {
                out.push(token.to_string());
                continue;
            }
            match self {
                Injector::Uniform(vocab) => {
                    out.push(vocab[rng.random_range(0..vocab.len())].clone());
                }
                Injector::Confusion(model) => match model.sample_candidate(token, rng) {
                    Draw::Replace(cand) => out.extend(cand.split(' ').map(str::to_string)),
                    Draw::Delete => {}
                },
            }
        }
        out
    }
}

/// Applies `spec` to `tokens`, drawing from `rng`.
pub fn inject<S: AsRef<str>, R: Rng + ?Sized>(
    tokens: &[S],
    spec: &NoiseSpec,
    vocab: &[String],
    confusion: Option<&ConfusionModel>,
    rng: &mut R,
) -> Result<Vec<String>> {
    spec.validate()?;
    let injector = Injector::new(spec.strategy, vocab, confusion)?;
    Ok(injector.inject(tokens, spec.beta, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn t(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    fn model(entries: &[(&str, &str, u64)]) -> ConfusionModel {
        let mut counts: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
        for (w, c, n) in entries {
            counts
                .entry(w.to_string())
                .or_default()
                .insert(c.to_string(), *n);
        }
        ConfusionModel::from_counts(counts, 1)
    }

    fn spec(beta: f64, strategy: NoiseStrategy) -> NoiseSpec {
        NoiseSpec {
            beta,
            strategy,
            seed: 5,
        }
    }

    #[test]
    fn zero_beta_is_identity() {
        let input = t("det var en mørk og stormfuld nat");
        let m = model(&[("det", "de", 1)]);
        let vocab = t("x y");
        for strategy in [NoiseStrategy::UniformVocab, NoiseStrategy::StatisticsConfusion] {
            let s = spec(0.0, strategy);
            let out = inject(&input, &s, &vocab, Some(&m), &mut s.rng_for("d")).unwrap();
            assert_eq!(out, input);
        }
    }

    #[test]
    fn full_beta_examples() {
        let s = spec(1.0, NoiseStrategy::UniformVocab);
        let out = inject(&t("a b"), &s, &t("x"), None, &mut s.rng_for("d")).unwrap();
        assert_eq!(out, t("x x"));

        let s = spec(1.0, NoiseStrategy::StatisticsConfusion);
        let m = model(&[("a", "b", 1)]);
        let out = inject(&t("a c a"), &s, &[], Some(&m), &mut s.rng_for("d")).unwrap();
        assert_eq!(out, t("b b"));

        let m = model(&[("a", "b c", 1)]);
        let out = inject(&t("a"), &s, &[], Some(&m), &mut s.rng_for("d")).unwrap();
        assert_eq!(out, t("b c"));
    }

    #[test]
    fn preconditions() {
        let s = spec(0.5, NoiseStrategy::StatisticsConfusion);
        assert!(matches!(
            inject(&t("a"), &s, &t("x"), None, &mut s.rng_for("d")),
            Err(Error::MissingResource { .. })
        ));
        let s = spec(0.5, NoiseStrategy::UniformVocab);
        assert!(inject(&t("a"), &s, &[], None, &mut s.rng_for("d")).is_err());
        let s = spec(1.5, NoiseStrategy::UniformVocab);
        assert!(inject(&t("a"), &s, &t("x"), None, &mut s.rng_for("d")).is_err());
    }

    #[test]
    fn substitution_rate_matches_beta() {
        let doc: Vec<String> = (0..100).map(|i| format!("w{i}")).collect();
        let vocab = t("x y z");
        let injector = Injector::new(NoiseStrategy::UniformVocab, &vocab, None).unwrap();
        let mut changed = 0usize;
        let runs = 10_000;
        for run in 0..runs {
            let mut rng = StreamKey::new(9).with_u64(run).rng();
            let out = injector.inject(&doc, 0.3, &mut rng);
            assert_eq!(out.len(), doc.len());
            changed += out.iter().zip(&doc).filter(|(a, b)| a != b).count();
        }
        let rate = changed as f64 / (runs as f64 * 100.0);
        assert!((rate - 0.3).abs() <= 0.01, "{rate}");
    }

    #[test]
    fn strategy_names() {
        for s in [NoiseStrategy::UniformVocab, NoiseStrategy::StatisticsConfusion] {
            assert_eq!(s.as_str().parse::<NoiseStrategy>().unwrap(), s);
        }
        assert!("gpt".parse::<NoiseStrategy>().is_err());
    }
}
