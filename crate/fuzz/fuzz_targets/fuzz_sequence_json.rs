#![no_main]
use libfuzzer_sys::fuzz_target;

use cutlab::regret::WeightSequence;

// Weight-sequence ingestion must never panic; accepted sequences must respect
// the declared budget (unless flagged unbudgeted) and round-trip.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(seq) = WeightSequence::from_json_str(text) {
        if !seq.is_unbudgeted() {
            assert!(seq.variation() <= seq.declared_budget() + 1e-9);
        }
        for t in 1..=seq.steps() {
            for &w in seq.weights_at(t) {
                assert!(w.is_finite() && w >= 0.0);
            }
        }
        let back =
            WeightSequence::from_json_str(&seq.to_json_string()).expect("canonical JSON parses");
        assert_eq!(back, seq);
    }
});
