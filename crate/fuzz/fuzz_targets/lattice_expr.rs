#![no_main]

use hk4_core::lattice::Lattice;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 128 {
        return;
    }
    if let Ok(l) = s.parse::<Lattice>() {
        if l.rank() <= 32 {
            let sig = l.signature();
            assert!(sig.positive + sig.negative <= l.rank());
        }
    }
});
