#![no_main]

use libfuzzer_sys::fuzz_target;
use quakebend::parse::parse_trace_row;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(triple) = parse_trace_row(text) {
            for v in [triple.x, triple.y, triple.z] {
                assert!(v.re.is_finite() && v.im.is_finite());
            }
        }
    }
});
