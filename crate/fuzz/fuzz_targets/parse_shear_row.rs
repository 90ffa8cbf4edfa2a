#![no_main]

use libfuzzer_sys::fuzz_target;
use quakebend::parse::parse_shear_row;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(shears) = parse_shear_row(text) {
            // accepted rows are finite and survive a serialization roundtrip
            for s in &shears.s {
                assert!(s.re.is_finite() && s.im.is_finite());
            }
            let back = parse_shear_row(&shears.to_csv_row()).unwrap();
            for (a, b) in back.s.iter().zip(&shears.s) {
                assert!((a - b).norm() <= 1e-13 * (1.0 + b.norm()));
            }
        }
    }
});
