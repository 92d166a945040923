#![no_main]

use iro::io::{decode_order, encode_order};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = decode_order(s) {
        let again = decode_order(&encode_order(&m, false)).unwrap();
        assert_eq!(again.pairs(), m.pairs());
        if m.is_total() {
            assert_eq!(decode_order(&encode_order(&m, true)).unwrap().pairs(), m.pairs());
        }
    }
});
