#![no_main]

use libfuzzer_sys::fuzz_target;
use toric_cover::rational::{fmt_q, parse_q};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Some(v) = parse_q(s) {
        assert_eq!(parse_q(&fmt_q(&v)), Some(v));
    }
});
