//! Text to topic vector: preprocess, vectorize, infer.

use crate::corpus::{preprocess, BowVector, Dictionary, Lexicon, PipelineConfig};
use crate::lda::{LdaModel, TopicVector};
use crate::Result;

#[derive(Debug, Clone)]
pub struct TopicPipeline {
    pub lexicon: Lexicon,
    pub config: PipelineConfig,
    pub dictionary: Dictionary,
    pub model: LdaModel,
    pub vb_iterations: usize,
    pub gamma_threshold: f64,
}

impl TopicPipeline {
    /// Fails with a dimension error when the model and dictionary disagree on
    /// vocabulary size.
    pub fn new(
        lexicon: Lexicon,
        config: PipelineConfig,
        dictionary: Dictionary,
        model: LdaModel,
        vb_iterations: usize,
        gamma_threshold: f64,
    ) -> Result<Self> {
        model.check_vocab(dictionary.len())?;
        Ok(Self {
            lexicon,
            config,
            dictionary,
            model,
            vb_iterations,
            gamma_threshold,
        })
    }

    pub fn bow(&self, text: &str) -> BowVector {
        let tokens = preprocess(text, &self.lexicon, &self.config);
        self.dictionary.vectorize(&tokens)
    }

    pub fn topic_vector(&self, text: &str) -> Result<TopicVector> {
        self.model
            .infer(&self.bow(text), self.vb_iterations, self.gamma_threshold)
    }
}
