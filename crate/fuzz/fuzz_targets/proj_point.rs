#![no_main]

use hk4_core::poly::ProjPoint;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 256 {
        return;
    }
    if let Ok(p) = s.parse::<ProjPoint>() {
        let back: ProjPoint = p.to_string().parse().expect("printed point parses");
        assert_eq!(back.coords(), p.coords());
    }
});
