#![no_main]

use libfuzzer_sys::fuzz_target;
use quakebend::parse::parse_weight_table;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(weights) = parse_weight_table(text) {
            // one finite value per comma-separated field, never empty
            assert_eq!(weights.len(), text.trim().split(',').count());
            assert!(!weights.is_empty());
            assert!(weights.iter().all(|w| w.is_finite()));
        }
    }
});
