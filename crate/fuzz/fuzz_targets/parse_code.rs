#![no_main]

use libfuzzer_sys::fuzz_target;
use vftk_core::io::{format_code, parse_code};

fuzz_target!(|data: &str| {
    if let Ok(c) = parse_code(data) {
        assert_eq!(parse_code(&format_code(&c)).unwrap(), c);
    }
});
