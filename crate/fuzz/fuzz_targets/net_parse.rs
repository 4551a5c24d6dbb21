#![no_main]

use hk4_core::cubic::NetOnQuinticRNC;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 512 {
        return;
    }
    if let Ok(net) = s.parse::<NetOnQuinticRNC>() {
        let back: NetOnQuinticRNC = net.to_string().parse().expect("printed net parses");
        assert_eq!(back, net);
    }
});
