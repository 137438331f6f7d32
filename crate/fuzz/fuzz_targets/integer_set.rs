#![no_main]
use libfuzzer_sys::fuzz_target;
use pathlab_core::json::{parse_integer_set, parse_integer_sets};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_integer_set(s);
        let _ = parse_integer_sets(s);
    }
});
