#![no_main]

use libfuzzer_sys::fuzz_target;
use topic_noise::corpus::{parse_corpus, write_corpus};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(episodes) = parse_corpus(text) {
        let mut buf = Vec::new();
        write_corpus(&episodes, &mut buf).unwrap();
        let again = parse_corpus(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(again, episodes);
    }
});
