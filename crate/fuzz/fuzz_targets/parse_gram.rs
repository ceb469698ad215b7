#![no_main]

use libfuzzer_sys::fuzz_target;
use vftk_core::io::{format_gram, parse_gram};

fuzz_target!(|data: &str| {
    if let Ok(l) = parse_gram(data) {
        assert_eq!(parse_gram(&format_gram(&l)).unwrap(), l);
    }
});
