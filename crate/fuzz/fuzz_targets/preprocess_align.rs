#![no_main]

use libfuzzer_sys::fuzz_target;
use topic_noise::confusion::{align, edit_distance, AlignmentOp};
use topic_noise::corpus::{preprocess, Lexicon, LexiconMode, PipelineConfig};
use topic_noise::metrics::wer;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let cfg = PipelineConfig {
        lexicon_mode: LexiconMode::Permissive,
        use_bigrams: true,
        ..Default::default()
    };
    let tokens = preprocess(text, &Lexicon::new(), &cfg);
    let (left, right) = text.split_at(text.char_indices().nth(text.chars().count() / 2).map_or(0, |(i, _)| i));
    let r: Vec<&str> = left.split_whitespace().take(64).collect();
    let h: Vec<&str> = right.split_whitespace().take(64).collect();
    let ops = align(&r, &h);
    let cost: usize = ops.iter().filter(|o| !matches!(o, AlignmentOp::Match(_))).count();
    assert_eq!(cost, edit_distance(&r, &h));
    if !r.is_empty() {
        assert_eq!(wer(&r, &h).unwrap().edits(), cost);
    }
    assert!(tokens.iter().all(|t| !t.is_empty() && !t.starts_with('_')));
});
