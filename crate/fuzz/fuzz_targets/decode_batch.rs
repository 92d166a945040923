#![no_main]

use iro::io::{decode_batch, encode_batch};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(batch) = decode_batch(s) {
        assert_eq!(decode_batch(&encode_batch(&batch, false)).unwrap().len(), batch.len());
    }
});
