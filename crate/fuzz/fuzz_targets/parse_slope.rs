#![no_main]

use libfuzzer_sys::fuzz_target;
use quakebend::parse::parse_slope;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(slope) = parse_slope(text) {
            // accepted slopes are canonical: q >= 0 and the display form
            // parses back to the same value
            assert!(slope.q >= 0);
            assert!(!(slope.p == 0 && slope.q == 0));
            assert_eq!(parse_slope(&slope.to_string()), Ok(slope));
        }
    }
});
