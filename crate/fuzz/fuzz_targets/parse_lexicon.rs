#![no_main]

use libfuzzer_sys::fuzz_target;
use topic_noise::corpus::{parse_lexicon, preprocess, PipelineConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(lex) = parse_lexicon(text) {
        let tokens = preprocess(text, &lex, &PipelineConfig::default());
        assert!(tokens.iter().all(|t| !t.is_empty()));
    }
});
