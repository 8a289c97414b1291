#![no_main]

use libfuzzer_sys::fuzz_target;
use topic_noise::confusion::{parse_pairs, ConfusionModel};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(pairs) = parse_pairs(text) {
        let model = ConfusionModel::accumulate(&pairs);
        assert_eq!(model.total_pairs(), pairs.len() as u64);
        let json = model.to_json().unwrap();
        assert_eq!(ConfusionModel::from_json(&json).unwrap(), model);
    }
});
