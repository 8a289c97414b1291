//! Latent Dirichlet allocation trained with batch variational EM.
//!
//! The variational family is the usual one: a Dirichlet `gamma` per document
//! over topics, a multinomial `phi` per (word, topic) and a Dirichlet `lambda`
//! per topic over the vocabulary. The E-step is coordinate ascent on
//! `(phi, gamma)` for each document; the M-step sets
//! `lambda[k][v] = eta + sum_d count(d, v) * phi[d][v][k]`.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{digamma, ln_gamma};

use crate::corpus::BowVector;
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Relative half-width of the multiplicative jitter applied to `eta` when
/// seeding `lambda`.
const INIT_JITTER: f64 = 0.05;

/// Documents per E-step batch. Sufficient statistics are reduced in document
/// order within and across batches.
const BATCH_DOCS: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub num_topics: usize,
    /// Symmetric document-topic prior; `None` means `1 / num_topics`.
    pub alpha: Option<f64>,
    pub eta: f64,
    pub vb_iterations: usize,
    pub em_passes: usize,
    pub seed: u64,
    pub gamma_threshold: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            num_topics: 30,
            alpha: None,
            eta: 0.1,
            vb_iterations: 20,
            em_passes: 10,
            seed: 0,
            gamma_threshold: 1e-3,
        }
    }
}

impl TrainConfig {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(1.0 / self.num_topics as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.num_topics < 2 {
            return bad(format!("num_topics must be at least 2, got {}", self.num_topics));
        }
        if !(self.alpha() > 0.0) {
            return bad(format!("alpha must be positive, got {}", self.alpha()));
        }
        if !(self.eta > 0.0) {
            return bad(format!("eta must be positive, got {}", self.eta));
        }
        if self.vb_iterations < 1 {
            return bad("vb_iterations must be at least 1".into());
        }
        if !(self.gamma_threshold >= 0.0) {
            return bad("gamma_threshold must be nonnegative".into());
        }
        Ok(())
    }
}

/// A document's probability distribution over topics.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicVector {
    pub probs: Vec<f64>,
}

impl TopicVector {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = k;
            }
        }
        best
    }

    pub fn is_on_simplex(&self, tol: f64) -> bool {
        let sum: f64 = self.probs.iter().sum();
        self.probs.iter().all(|&p| p >= 0.0) && (sum - 1.0).abs() <= tol
    }
}

#[derive(Debug, Clone)]
pub struct LdaModel {
    num_topics: usize,
    alpha: f64,
    eta: f64,
    vocab_size: usize,
    /// Row-major `num_topics x vocab_size`.
    lambda: Vec<f64>,
    /// `exp(E[log beta])`, same layout as `lambda`.
    exp_elog_beta: Vec<f64>,
    elog_beta: Vec<f64>,
}

impl PartialEq for LdaModel {
    fn eq(&self, other: &Self) -> bool {
        self.num_topics == other.num_topics
            && self.alpha.to_bits() == other.alpha.to_bits()
            && self.eta.to_bits() == other.eta.to_bits()
            && self.vocab_size == other.vocab_size
            && self.lambda.len() == other.lambda.len()
            && self
                .lambda
                .iter()
                .zip(&other.lambda)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl LdaModel {
    pub fn from_lambda(
        num_topics: usize,
        alpha: f64,
        eta: f64,
        vocab_size: usize,
        lambda: Vec<f64>,
    ) -> Result<Self> {
        if num_topics == 0 || vocab_size == 0 {
            return Err(Error::CorruptModel("model has no topics or no terms".into()));
        }
        let expected = num_topics
            .checked_mul(vocab_size)
            .ok_or_else(|| Error::CorruptModel("model dimensions overflow".into()))?;
        if lambda.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: lambda.len(),
            });
        }
        if !(alpha > 0.0 && alpha.is_finite()) || !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::CorruptModel("priors must be positive and finite".into()));
        }
        if lambda.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::CorruptModel("lambda entries must be positive and finite".into()));
        }
        let mut model = Self {
            num_topics,
            alpha,
            eta,
            vocab_size,
            lambda,
            exp_elog_beta: Vec::new(),
            elog_beta: Vec::new(),
        };
        model.refresh_expectations();
        Ok(model)
    }

    fn refresh_expectations(&mut self) {
        let v = self.vocab_size;
        let mut elog = vec![0.0; self.lambda.len()];
        for k in 0..self.num_topics {
            let row = &self.lambda[k * v..(k + 1) * v];
            let psi_sum = digamma(row.iter().sum());
            for (out, &x) in elog[k * v..(k + 1) * v].iter_mut().zip(row) {
                *out = digamma(x) - psi_sum;
            }
        }
        self.exp_elog_beta = elog.iter().map(|x| x.exp()).collect();
        self.elog_beta = elog;
    }

    pub fn num_topics(&self) -> usize {
        self.num_topics
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn lambda_row(&self, topic: usize) -> &[f64] {
        &self.lambda[topic * self.vocab_size..(topic + 1) * self.vocab_size]
    }

    pub fn check_vocab(&self, dictionary_len: usize) -> Result<()> {
        if dictionary_len != self.vocab_size {
            return Err(Error::DimensionMismatch {
                expected: self.vocab_size,
                actual: dictionary_len,
            });
        }
        Ok(())
    }

    fn check_bow(&self, bow: &BowVector) -> Result<()> {
        match bow.entries.iter().find(|&&(id, _)| id >= self.vocab_size) {
            Some(&(id, _)) => Err(Error::TermOutOfRange {
                id,
                vocab_size: self.vocab_size,
            }),
            None => Ok(()),
        }
    }

    /// Topic vector of a document: the normalised variational Dirichlet
    /// parameter after at most `vb_iterations` coordinate-ascent sweeps.
    pub fn infer(
        &self,
        bow: &BowVector,
        vb_iterations: usize,
        gamma_threshold: f64,
    ) -> Result<TopicVector> {
        self.check_bow(bow)?;
        let mut gamma = self.initial_gamma(bow);
        let mut phi = Vec::new();
        self.e_step(bow, &mut gamma, &mut phi, vb_iterations, gamma_threshold);
        let sum: f64 = gamma.iter().sum();
        Ok(TopicVector {
            probs: gamma.iter().map(|g| g / sum).collect(),
        })
    }

    fn initial_gamma(&self, bow: &BowVector) -> Vec<f64> {
        let start = self.alpha + bow.total() as f64 / self.num_topics as f64;
        vec![start; self.num_topics]
    }

    /// Runs the document E-step in place. On return `phi` holds the
    /// responsibilities of the final sweep, `entries.len() x num_topics`.
    fn e_step(
        &self,
        bow: &BowVector,
        gamma: &mut [f64],
        phi: &mut Vec<f64>,
        max_iter: usize,
        threshold: f64,
    ) {
        let k_n = self.num_topics;
        let v_n = self.vocab_size;
        phi.clear();
        phi.resize(bow.entries.len() * k_n, 0.0);
        if bow.entries.is_empty() {
            return;
        }
        let mut exp_elog_theta: Vec<f64> = gamma.iter().map(|&g| digamma(g).exp()).collect();
        let mut next = vec![0.0; k_n];
        for _ in 0..max_iter {
            next.iter_mut().for_each(|g| *g = self.alpha);
            for (w, &(id, count)) in bow.entries.iter().enumerate() {
                let row = &mut phi[w * k_n..(w + 1) * k_n];
                let mut norm = 0.0;
                for k in 0..k_n {
                    let p = exp_elog_theta[k] * self.exp_elog_beta[k * v_n + id];
                    row[k] = p;
                    norm += p;
                }
                if !(norm > 0.0 && norm.is_finite()) {
                    self.log_space_phi(gamma, id, row);
                } else {
                    row.iter_mut().for_each(|p| *p /= norm);
                }
                let c = count as f64;
                for k in 0..k_n {
                    next[k] += c * row[k];
                }
            }
            let change: f64 = next
                .iter()
                .zip(gamma.iter())
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
                / k_n as f64;
            gamma.copy_from_slice(&next);
            for k in 0..k_n {
                exp_elog_theta[k] = digamma(gamma[k]).exp();
            }
            if change < threshold {
                break;
            }
        }
    }

    fn log_space_phi(&self, gamma: &[f64], id: usize, row: &mut [f64]) {
        let v_n = self.vocab_size;
        for (k, out) in row.iter_mut().enumerate() {
            *out = digamma(gamma[k]) + self.elog_beta[k * v_n + id];
        }
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut norm = 0.0;
        for p in row.iter_mut() {
            *p = (*p - max).exp();
            norm += *p;
        }
        row.iter_mut().for_each(|p| *p /= norm);
    }

    /// Term ids of the `m` largest entries of a topic's `lambda` row, ties
    /// broken by ascending id.
    pub fn top_words(&self, topic: usize, m: usize) -> Vec<usize> {
        let row = self.lambda_row(topic);
        let mut ids: Vec<usize> = (0..self.vocab_size).collect();
        ids.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
        ids.truncate(m);
        ids
    }

    /// Evidence lower bound of `bows` under this model with per-document
    /// Dirichlet parameters `gammas`, with `phi` at its optimum given
    /// `gamma`.
    pub fn elbo(&self, bows: &[BowVector], gammas: &[Vec<f64>]) -> f64 {
        let k_n = self.num_topics;
        let v_n = self.vocab_size;
        let ln_gamma_alpha = ln_gamma(self.alpha);
        let ln_gamma_k_alpha = ln_gamma(k_n as f64 * self.alpha);
        let doc_terms: Vec<f64> = bows
            .par_iter()
            .zip(gammas.par_iter())
            .map(|(bow, gamma)| {
                let psi_sum = digamma(gamma.iter().sum());
                let elog_theta: Vec<f64> = gamma.iter().map(|&g| digamma(g) - psi_sum).collect();
                let mut score = 0.0;
                let mut buf = vec![0.0; k_n];
                for &(id, count) in &bow.entries {
                    for k in 0..k_n {
                        buf[k] = elog_theta[k] + self.elog_beta[k * v_n + id];
                    }
                    let max = buf.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    let lse = max + buf.iter().map(|x| (x - max).exp()).sum::<f64>().ln();
                    score += count as f64 * lse;
                }
                for k in 0..k_n {
                    score += (self.alpha - gamma[k]) * elog_theta[k] + ln_gamma(gamma[k]);
                }
                score += ln_gamma_k_alpha - k_n as f64 * ln_gamma_alpha - ln_gamma(gamma.iter().sum());
                score
            })
            .collect();
        let mut total: f64 = doc_terms.iter().sum();
        let ln_gamma_eta = ln_gamma(self.eta);
        let ln_gamma_v_eta = ln_gamma(v_n as f64 * self.eta);
        for k in 0..k_n {
            let row = self.lambda_row(k);
            let elog = &self.elog_beta[k * v_n..(k + 1) * v_n];
            let mut s = 0.0;
            for (&l, &e) in row.iter().zip(elog) {
                s += (self.eta - l) * e + ln_gamma(l);
            }
            total += s - ln_gamma(row.iter().sum()) + ln_gamma_v_eta - v_n as f64 * ln_gamma_eta;
        }
        total
    }
}

/// Per-pass diagnostics from training.
#[derive(Debug, Clone, Default)]
pub struct TrainTrace {
    pub elbo: Vec<f64>,
}

pub fn train(bows: &[BowVector], vocab_size: usize, cfg: &TrainConfig) -> Result<LdaModel> {
    train_inner(bows, vocab_size, cfg, false).map(|(m, _)| m)
}

/// Like [`train`], additionally recording the ELBO after every pass.
pub fn train_traced(
    bows: &[BowVector],
    vocab_size: usize,
    cfg: &TrainConfig,
) -> Result<(LdaModel, TrainTrace)> {
    train_inner(bows, vocab_size, cfg, true)
}

fn train_inner(
    bows: &[BowVector],
    vocab_size: usize,
    cfg: &TrainConfig,
    trace_elbo: bool,
) -> Result<(LdaModel, TrainTrace)> {
    cfg.validate()?;
    if vocab_size == 0 {
        return Err(Error::EmptyDictionary);
    }
    if bows.iter().all(BowVector::is_empty) {
        return Err(Error::EmptyCorpus);
    }
    let k_n = cfg.num_topics;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let lambda: Vec<f64> = (0..k_n * vocab_size)
        .map(|_| cfg.eta * (1.0 + INIT_JITTER * rng.random_range(-1.0..1.0)))
        .collect();
    let mut model = LdaModel::from_lambda(k_n, cfg.alpha(), cfg.eta, vocab_size, lambda)?;
    for bow in bows {
        model.check_bow(bow)?;
    }

    // E-steps after the first pass resume from the previous pass's gamma,
    // which keeps the ELBO monotone under truncated inner iterations.
    let mut gammas: Vec<Vec<f64>> = bows.iter().map(|b| model.initial_gamma(b)).collect();
    let mut trace = TrainTrace::default();
    for _ in 0..cfg.em_passes {
        let mut sstats = vec![0.0; k_n * vocab_size];
        for (bow_batch, gamma_batch) in bows.chunks(BATCH_DOCS).zip(gammas.chunks_mut(BATCH_DOCS)) {
            let phis: Vec<Vec<f64>> = bow_batch
                .par_iter()
                .zip(gamma_batch.par_iter_mut())
                .map(|(bow, gamma)| {
                    let mut phi = Vec::new();
                    model.e_step(bow, gamma, &mut phi, cfg.vb_iterations, cfg.gamma_threshold);
                    phi
                })
                .collect();
            for (bow, phi) in bow_batch.iter().zip(&phis) {
                for (w, &(id, count)) in bow.entries.iter().enumerate() {
                    let c = count as f64;
                    for k in 0..k_n {
                        sstats[k * vocab_size + id] += c * phi[w * k_n + k];
                    }
                }
            }
        }
        for x in sstats.iter_mut() {
            *x += cfg.eta;
        }
        model.lambda = sstats;
        model.refresh_expectations();
        if trace_elbo {
            trace.elbo.push(model.elbo(bows, &gammas));
        }
    }
    Ok((model, trace))
}

#[derive(Serialize, Deserialize)]
struct ModelHeader {
    format_version: u32,
    #[serde(rename = "K")]
    num_topics: usize,
    alpha: f64,
    eta: f64,
    #[serde(rename = "V")]
    vocab_size: usize,
    /// File name, relative to the header, of the little-endian f64 copy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda_binary: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<Vec<f64>>,
}

pub fn encode_lambda_le(lambda: &[f64]) -> Vec<u8> {
    lambda.iter().flat_map(|x| x.to_le_bytes()).collect()
}

pub fn decode_lambda_le(bytes: &[u8]) -> Result<Vec<f64>> {
    if bytes.len() % 8 != 0 {
        return Err(Error::CorruptModel(format!(
            "binary lambda length {} is not a multiple of 8",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}

impl LdaModel {
    /// Header JSON with the inline text lambda and a reference to
    /// `binary_name`.
    pub fn header_json(&self, binary_name: Option<&str>) -> Result<String> {
        let header = ModelHeader {
            format_version: FORMAT_VERSION,
            num_topics: self.num_topics,
            alpha: self.alpha,
            eta: self.eta,
            vocab_size: self.vocab_size,
            lambda_binary: binary_name.map(str::to_string),
            lambda: Some(self.lambda.clone()),
        };
        Ok(serde_json::to_string(&header)?)
    }

    /// Decodes a header, taking lambda from the inline array when present and
    /// from `binary` otherwise.
    pub fn from_parts(header_json: &str, binary: Option<&[u8]>) -> Result<Self> {
        let header = parse_header(header_json)?;
        let lambda = match (header.lambda, binary) {
            (Some(inline), _) => inline,
            (None, Some(bytes)) => decode_lambda_le(bytes)?,
            (None, None) => return Err(Error::CorruptModel("model has no lambda data".into())),
        };
        Self::from_lambda(header.num_topics, header.alpha, header.eta, header.vocab_size, lambda)
    }

    /// Writes `path` (JSON header with inline lambda) and a sibling
    /// `<stem>.lambda.bin`.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let bin_path = binary_path(path);
        let bin_name = bin_path
            .file_name()
            .and_then(|n| n.to_str())
            .map(str::to_string);
        std::fs::write(&bin_path, encode_lambda_le(&self.lambda))
            .map_err(|e| Error::io(&bin_path, e))?;
        std::fs::write(path, self.header_json(bin_name.as_deref())?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let header = parse_header(&text)?;
        if header.lambda.is_some() {
            return Self::from_parts(&text, None);
        }
        let name = header
            .lambda_binary
            .ok_or_else(|| Error::CorruptModel("model has no lambda data".into()))?;
        let bin_path = path.parent().unwrap_or(Path::new(".")).join(name);
        let bytes = std::fs::read(&bin_path).map_err(|e| Error::io(&bin_path, e))?;
        Self::from_parts(&text, Some(&bytes))
    }
}

fn parse_header(text: &str) -> Result<ModelHeader> {
    let header: ModelHeader =
        serde_json::from_str(text).map_err(|e| Error::CorruptModel(e.to_string()))?;
    if header.format_version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(header.format_version));
    }
    Ok(header)
}

fn binary_path(header: &Path) -> PathBuf {
    let stem = header
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("model");
    header.with_file_name(format!("{stem}.lambda.bin"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bow(entries: &[(usize, u32)]) -> BowVector {
        BowVector {
            entries: entries.to_vec(),
        }
    }

    fn toy_model() -> LdaModel {
        // Topic 0 owns term 0, topic 1 owns term 1.
        LdaModel::from_lambda(2, 0.5, 0.1, 3, vec![50.0, 0.1, 1.0, 0.1, 50.0, 1.0]).unwrap()
    }

    /// Straight-line transcription of the E-step recurrence.
    fn oracle_infer(model: &LdaModel, doc: &[(usize, u32)], iters: usize) -> Vec<f64> {
        let k_n = model.num_topics();
        let elog_beta = |k: usize, v: usize| {
            let row = model.lambda_row(k);
            digamma(row[v]) - digamma(row.iter().sum())
        };
        let total: u32 = doc.iter().map(|d| d.1).sum();
        let mut gamma = vec![model.alpha() + total as f64 / k_n as f64; k_n];
        for _ in 0..iters {
            let mut next = vec![model.alpha(); k_n];
            for &(v, c) in doc {
                let w: Vec<f64> = (0..k_n)
                    .map(|k| (digamma(gamma[k]) + elog_beta(k, v)).exp())
                    .collect();
                let s: f64 = w.iter().sum();
                for k in 0..k_n {
                    next[k] += c as f64 * w[k] / s;
                }
            }
            gamma = next;
        }
        let s: f64 = gamma.iter().sum();
        gamma.iter().map(|g| g / s).collect()
    }

    #[test]
    fn empty_document_is_uniform() {
        let tv = toy_model().infer(&BowVector::default(), 20, 1e-3).unwrap();
        assert_eq!(tv.probs, vec![0.5, 0.5]);
    }

    #[test]
    fn dominant_row_wins() {
        let model = toy_model();
        let tv = model.infer(&bow(&[(0, 50)]), 20, 0.0).unwrap();
        assert_eq!(tv.argmax(), 0);
        assert!(tv.probs[0] > 0.9, "{:?}", tv.probs);
        let expected = oracle_infer(&model, &[(0, 50)], 20);
        for (a, b) in tv.probs.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert!(tv.is_on_simplex(1e-9));
    }

    #[test]
    fn infer_matches_oracle_on_mixed_doc() {
        let model = toy_model();
        let doc = [(0, 3), (1, 5), (2, 2)];
        let tv = model.infer(&bow(&doc), 7, 0.0).unwrap();
        let expected = oracle_infer(&model, &doc, 7);
        for (a, b) in tv.probs.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn infer_rejects_out_of_range_terms() {
        assert!(matches!(
            toy_model().infer(&bow(&[(3, 1)]), 5, 1e-3),
            Err(Error::TermOutOfRange { id: 3, .. })
        ));
    }

    #[test]
    fn top_words_order_and_ties() {
        let m = LdaModel::from_lambda(2, 0.5, 0.1, 3, vec![0.1, 5.0, 3.0, 2.0, 2.0, 1.0]).unwrap();
        assert_eq!(m.top_words(0, 2), vec![1, 2]);
        assert_eq!(m.top_words(1, 1), vec![0]);
        let mut all = m.top_words(0, 3);
        all.sort();
        assert_eq!(all, vec![0, 1, 2]);
    }

    #[test]
    fn training_rejects_empty_corpus() {
        let cfg = TrainConfig {
            num_topics: 2,
            ..Default::default()
        };
        assert!(matches!(
            train(&[BowVector::default(), BowVector::default()], 4, &cfg),
            Err(Error::EmptyCorpus)
        ));
        let bad = TrainConfig {
            num_topics: 1,
            ..Default::default()
        };
        assert!(train(&[bow(&[(0, 1)])], 4, &bad).is_err());
    }

    #[test]
    fn training_is_deterministic() {
        let docs: Vec<BowVector> = (0..20)
            .map(|i| {
                if i % 2 == 0 {
                    bow(&[(0, 3), (1, 2)])
                } else {
                    bow(&[(2, 4), (3, 1)])
                }
            })
            .collect();
        let cfg = TrainConfig {
            num_topics: 2,
            seed: 11,
            ..Default::default()
        };
        let a = train(&docs, 4, &cfg).unwrap();
        let b = train(&docs, 4, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.lambda().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let m = LdaModel::from_lambda(2, 0.5, 0.1, 3, vec![0.1, 1.0 / 3.0, 2.5e-7, 7.0, 1e10, 0.3])
            .unwrap();
        m.save(&path).unwrap();
        let back = LdaModel::load(&path).unwrap();
        assert_eq!(m, back);

        // Header without the inline array falls back to the binary file.
        let text = std::fs::read_to_string(&path).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value.as_object_mut().unwrap().remove("lambda");
        std::fs::write(&path, value.to_string()).unwrap();
        assert_eq!(LdaModel::load(&path).unwrap(), m);

        std::fs::write(&path, &text[..text.len() / 2]).unwrap();
        assert!(matches!(LdaModel::load(&path), Err(Error::CorruptModel(_))));
    }

    #[test]
    fn header_errors() {
        let m = toy_model();
        let good = m.header_json(None).unwrap();
        let v2 = good.replace("\"format_version\":1", "\"format_version\":2");
        assert!(matches!(LdaModel::from_parts(&v2, None), Err(Error::UnsupportedVersion(2))));
        let bad_shape = good.replace("\"V\":3", "\"V\":4");
        assert!(matches!(
            LdaModel::from_parts(&bad_shape, None),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(m.check_vocab(4).is_err());
        assert!(m.check_vocab(3).is_ok());
        assert!(decode_lambda_le(&[0u8; 7]).is_err());
    }
}
