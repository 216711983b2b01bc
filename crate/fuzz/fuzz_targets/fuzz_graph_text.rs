#![no_main]
use libfuzzer_sys::fuzz_target;

use cutlab::graph::Graph;

// The graph text parser must never panic; accepted graphs must satisfy the
// structural invariants and survive a serialization round trip.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = Graph::from_text(text) {
        for e in g.edges() {
            assert_ne!(e.u, e.v);
            assert!(e.u < g.n() && e.v < g.n());
            assert!(e.u < e.v);
            assert!(e.w.is_finite() && e.w >= 0.0);
        }
        let back = Graph::from_text(&g.to_text()).expect("canonical text parses");
        assert_eq!(back, g);
    }
});
