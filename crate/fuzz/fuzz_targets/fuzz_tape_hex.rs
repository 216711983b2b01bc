#![no_main]
use libfuzzer_sys::fuzz_target;

use cutlab::advice::AdviceTape;

// Tape deserialization must never panic on arbitrary hex/length pairs, and
// accepted tapes must round-trip with their exact bit length.
fuzz_target!(|data: &[u8]| {
    if data.len() < 2 {
        return;
    }
    let bit_len = u16::from_le_bytes([data[0], data[1]]) as usize;
    let Ok(hex) = std::str::from_utf8(&data[2..]) else {
        return;
    };
    if let Ok(tape) = AdviceTape::from_hex(hex, bit_len) {
        assert_eq!(tape.len(), bit_len);
        let (out_hex, out_len) = tape.to_hex();
        assert_eq!(out_len, bit_len);
        assert_eq!(out_hex, hex.to_ascii_lowercase());
        assert_eq!(AdviceTape::from_hex(&out_hex, out_len).unwrap(), tape);
    }
});
