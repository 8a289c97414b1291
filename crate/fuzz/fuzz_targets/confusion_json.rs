#![no_main]

use libfuzzer_sys::fuzz_target;
use topic_noise::confusion::ConfusionModel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(model) = ConfusionModel::from_json(text) {
        let words: Vec<String> = model.words().map(str::to_string).collect();
        for w in &words {
            let dist = model.candidate_distribution(w).unwrap();
            let sum: f64 = dist.iter().map(|d| d.1).sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }
        assert_eq!(ConfusionModel::from_json(&model.to_json().unwrap()).unwrap(), model);
    }
});
