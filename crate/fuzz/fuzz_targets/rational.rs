#![no_main]
use libfuzzer_sys::fuzz_target;
use pathlab_core::rational::ExtendedRational;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = s.parse::<ExtendedRational>() {
            let text = r.to_string();
            assert_eq!(text.parse::<ExtendedRational>().ok(), Some(r));
        }
    }
});
