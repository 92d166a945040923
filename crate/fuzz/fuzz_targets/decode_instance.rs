#![no_main]

use iro::io::{decode_instance, encode_instance};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = decode_instance(s) {
        assert_eq!(decode_instance(&encode_instance(&inst)).unwrap(), inst);
    }
});
