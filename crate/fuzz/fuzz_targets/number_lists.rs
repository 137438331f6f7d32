#![no_main]
use libfuzzer_sys::fuzz_target;
use pathlab_core::json::{parse_extended_rationals, parse_measures, parse_rationals, parse_u64s, parse_vtable};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_rationals(s);
        let _ = parse_extended_rationals(s);
        let _ = parse_measures(s);
        let _ = parse_u64s(s);
        let _ = parse_vtable(s);
    }
});
