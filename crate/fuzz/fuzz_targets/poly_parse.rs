#![no_main]

use hk4_core::poly::MultiPoly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 512 {
        return;
    }
    for nvars in [3, 6] {
        if let Ok(p) = MultiPoly::parse_with_vars(s, nvars) {
            let back = MultiPoly::parse_with_vars(&p.to_string(), nvars).expect("printed polynomial parses");
            assert_eq!(back, p);
        }
    }
});
