//! Measuring how well LDA topic vectors survive ASR-style transcription noise.
//!
//! The crate is organised bottom-up:
//!
//! - [`corpus`]: episode records, lexicon-driven preprocessing, dictionary and
//!   bag-of-words vectors.
//! - [`lda`]: batch variational EM training and per-document topic inference.
//! - [`coherence`]: U_mass coherence and grid search for model selection.
//! - [`confusion`]: word alignment and the word-level confusion model learned
//!   from reference/hypothesis pairs.
//! - [`noise`]: substitution noise at rate beta, uniform or confusion-driven.
//! - [`metrics`]: topic-vector cosine, corpus similarity and word error rate.
//! - [`harness`]: baseline filtering, noise sweeps, decile analysis, the
//!   beta/WER curve and CSV/SVG export.

pub mod coherence;
pub mod confusion;
pub mod corpus;
mod error;
pub mod harness;
pub mod lda;
pub mod metrics;
pub mod noise;
pub mod pipeline;
pub mod rng;

pub use error::{Error, Result};
