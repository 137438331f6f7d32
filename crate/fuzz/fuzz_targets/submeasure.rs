#![no_main]
use libfuzzer_sys::fuzz_target;
use pathlab_core::json::{parse_submeasure, submeasure_json};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(phi) = parse_submeasure(s) {
            // emitted form parses back to the same values
            let again = parse_submeasure(&submeasure_json(&phi).to_string()).expect("round trip");
            if phi.ground_size() <= 10 {
                assert_eq!(phi.materialize().ok(), again.materialize().ok());
            }
        }
    }
});
