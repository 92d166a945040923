#![no_main]

use iro::engine::{propagate_only, Propagation};
use iro::io::{decode_system, encode_system};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(cs) = decode_system(s) {
        assert_eq!(decode_system(&encode_system(&cs)).unwrap().atoms(), cs.atoms());
        if cs.window().len() <= 64 {
            if let Propagation::Unsat(cert) = propagate_only(&cs) {
                assert!(iro::engine::verify_certificate(&cs, &cert));
            }
        }
    }
});
