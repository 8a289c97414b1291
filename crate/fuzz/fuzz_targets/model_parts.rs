#![no_main]

use libfuzzer_sys::fuzz_target;
use topic_noise::corpus::BowVector;
use topic_noise::lda::LdaModel;

// First byte: header length modulo the input; the rest splits into a JSON
// header and a raw little-endian lambda.
fuzz_target!(|data: &[u8]| {
    let Some((&split, rest)) = data.split_first() else { return };
    let cut = if rest.is_empty() { 0 } else { split as usize % (rest.len() + 1) };
    let (head, bin) = rest.split_at(cut.min(rest.len()));
    let Ok(header) = std::str::from_utf8(head) else { return };
    for binary in [None, Some(bin)] {
        if let Ok(model) = LdaModel::from_parts(header, binary) {
            if model.vocab_size() > 0 {
                let bow = BowVector { entries: vec![(0, 3)] };
                if let Ok(tv) = model.infer(&bow, 5, 1e-3) {
                    assert!(tv.is_on_simplex(1e-6));
                }
            }
        }
    }
});
