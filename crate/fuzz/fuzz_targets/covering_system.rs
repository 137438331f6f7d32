#![no_main]
use libfuzzer_sys::fuzz_target;
use pathlab_core::json::parse_covering_system;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_covering_system(s);
    }
});
