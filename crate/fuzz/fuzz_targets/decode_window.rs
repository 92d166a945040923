#![no_main]

use iro::io::{decode_window, encode_window};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = decode_window(s) {
        assert_eq!(decode_window(&encode_window(&w)).unwrap(), w);
    }
});
