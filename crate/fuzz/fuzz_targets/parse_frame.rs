#![no_main]

use libfuzzer_sys::fuzz_target;
use vftk_core::io::{format_frame, parse_frame};

fuzz_target!(|data: &str| {
    if let Ok(vs) = parse_frame(data) {
        assert_eq!(parse_frame(&format_frame(&vs)).unwrap(), vs);
    }
});
