#![no_main]

use iro::engine::verify_certificate;
use iro::io::{decode_certificate, decode_system};
use libfuzzer_sys::fuzz_target;

// Input: a system document, a NUL byte, then a certificate document.
fuzz_target!(|data: &[u8]| {
    let Some(split) = data.iter().position(|&b| b == 0) else { return };
    let (Ok(sys), Ok(cert)) = (std::str::from_utf8(&data[..split]), std::str::from_utf8(&data[split + 1..])) else {
        return;
    };
    let Ok(cs) = decode_system(sys) else { return };
    if let Ok(c) = decode_certificate(cert, cs.window()) {
        let _ = verify_certificate(&cs, &c);
    }
});
