#![no_main]
use libfuzzer_sys::fuzz_target;

use cutlab::harness::ExperimentConfig;

// Config parsing must never panic, and accepted configs must round-trip
// through their canonical text form losslessly.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = ExperimentConfig::from_text(text) {
        let back = ExperimentConfig::from_text(&config.to_text()).expect("canonical form parses");
        assert_eq!(back, config);
    }
});
