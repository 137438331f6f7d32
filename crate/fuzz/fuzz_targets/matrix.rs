#![no_main]
use libfuzzer_sys::fuzz_target;
use pathlab_core::json::{matrix_json, parse_matrix};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = parse_matrix(s) {
            let again = parse_matrix(&matrix_json(&m).to_string()).expect("round trip");
            assert_eq!(m.entries(), again.entries());
        }
    }
});
