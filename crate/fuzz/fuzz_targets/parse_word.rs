#![no_main]

use libfuzzer_sys::fuzz_target;
use quakebend::parse::parse_word;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(word) = parse_word(text) {
            // accepted words are freely reduced and display/parse is stable
            let letters = word.letters();
            assert!(letters.windows(2).all(|w| w[0] != -w[1]));
            assert_eq!(parse_word(&word.to_string()).unwrap(), word);
        }
    }
});
