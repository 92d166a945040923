#![no_main]

use iro::io::{decode_generators, encode_generators};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = decode_generators(s) {
        assert_eq!(decode_generators(&encode_generators(&g)).unwrap(), g);
    }
});
