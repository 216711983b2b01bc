//! A laboratory for online minimum-cut algorithms.
//!
//! The crate implements the vertex-arrival online model for cut problems:
//! graphs and cut assignments ([`graph`]), exact offline oracles ([`oracles`]),
//! the online execution engine and its evaluation functionals ([`engine`]),
//! the concrete online algorithms ([`algorithms`]), the advice-tape model
//! ([`advice`]), adversarial instance families and adaptive games
//! ([`adversaries`]), non-stationary regret under a variational budget
//! ([`regret`]), constructive greedy-order builders ([`greedy_order`]), and
//! the experiment harness ([`harness`]).
//!
//! Everything is deterministic: all randomness flows through ChaCha8 streams
//! keyed by 64-bit seeds (see [`seeding`]), and every enumeration follows a
//! fixed vertex/edge iteration order.

pub mod advice;
pub mod adversaries;
pub mod algorithms;
pub mod engine;
pub mod graph;
pub mod greedy_order;
pub mod harness;
pub mod oracles;
pub mod regret;

pub use graph::{
    crossing_weight, cut_weight, degree_stats, revealed_prefix, ArrivalOrder, CutAssignment,
    CutValue, Graph, GraphError, Side,
};

/// Seed-stream derivation: one master seed, documented per-component streams.
///
/// `stream_seed(master, label, index)` hashes the component label with FNV-1a,
/// mixes in the index, and finalizes with SplitMix64. The construction is
/// fixed; identical inputs yield identical streams on every platform.
pub mod seeding {
    const FNV_OFFSET: u64 = 0xcbf29ce484222325;
    const FNV_PRIME: u64 = 0x100000001b3;

    fn fnv1a(bytes: &[u8]) -> u64 {
        let mut h = FNV_OFFSET;
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(FNV_PRIME);
        }
        h
    }

    fn splitmix64(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e3779b97f4a7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Derive the seed for stream `(label, index)` under `master`.
    pub fn stream_seed(master: u64, label: &str, index: u64) -> u64 {
        splitmix64(master ^ fnv1a(label.as_bytes()) ^ index.wrapping_mul(0x9e3779b97f4a7c15))
    }

    #[cfg(test)]
    mod tests {
        use super::stream_seed;

        #[test]
        fn streams_are_stable_and_distinct() {
            assert_eq!(stream_seed(1, "gnp", 0), stream_seed(1, "gnp", 0));
            assert_ne!(stream_seed(1, "gnp", 0), stream_seed(1, "gnp", 1));
            assert_ne!(stream_seed(1, "gnp", 0), stream_seed(1, "order", 0));
            assert_ne!(stream_seed(1, "gnp", 0), stream_seed(2, "gnp", 0));
        }
    }
}
