#![no_main]
use libfuzzer_sys::fuzz_target;
use pathlab_core::json::{parse_pattern, pattern_json};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = parse_pattern(s) {
            let again = parse_pattern(&pattern_json(&p).to_string()).expect("round trip");
            assert_eq!(p, again);
        }
    }
});
