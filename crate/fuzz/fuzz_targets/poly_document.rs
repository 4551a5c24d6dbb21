#![no_main]

use hk4_core::poly::MultiPoly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 1024 {
        return;
    }
    if let Ok(p) = MultiPoly::parse_document(s, 6) {
        assert_eq!(
            MultiPoly::parse_document(&p.to_string(), 6).expect("printed polynomial parses"),
            p
        );
    }
});
