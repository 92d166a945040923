#![no_main]

use iro::io::{decode_semigroup, encode_semigroup};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(sg) = decode_semigroup(s) {
        assert!(decode_semigroup(&encode_semigroup(&sg)).is_ok());
    }
});
