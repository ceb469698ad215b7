#![no_main]

use libfuzzer_sys::fuzz_target;
use vftk_core::io::{format_vectors, parse_vectors};

fuzz_target!(|data: &str| {
    if let Ok(vs) = parse_vectors(data) {
        assert_eq!(parse_vectors(&format_vectors(&vs)).unwrap(), vs);
    }
});
