#![no_main]

use libfuzzer_sys::fuzz_target;
use topic_noise::harness::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = RunConfig::from_json(text) {
        assert!(cfg.sweep.beta_grid.iter().all(|b| (0.0..=1.0).contains(b)));
        let _ = cfg.grid.points();
    }
});
