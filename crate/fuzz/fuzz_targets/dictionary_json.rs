#![no_main]

use libfuzzer_sys::fuzz_target;
use topic_noise::corpus::Dictionary;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(dict) = Dictionary::from_json(text) {
        for id in 0..dict.len() {
            assert_eq!(dict.id(dict.term(id).unwrap()), Some(id));
        }
        let bow = dict.vectorize(dict.terms());
        assert_eq!(bow.total() as usize, dict.len());
        assert_eq!(Dictionary::from_json(&dict.to_json().unwrap()).unwrap(), dict);
    }
});
