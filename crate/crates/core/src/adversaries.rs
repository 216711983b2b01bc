//! Adversarial instance generators and the adaptive two-vertex games.
//!
//! Every generator exports role labels (which vertices play x, y, z, A, B,
//! A', B', C, D, S, T, x1..x4) so tests and games can address construction
//! parts; vertex ids are assigned in a documented canonical order. Random
//! generation is ChaCha8-seeded and bit-identical across platforms.

use crate::engine::{EngineError, OnlineCutAlgorithm, StepDriver};
use crate::graph::{cut_weight, CutAssignment, CutValue, Graph, GraphError, Side};
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AdversaryError {
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("engine: {0}")]
    Engine(Box<EngineError>),
}

impl From<EngineError> for AdversaryError {
    fn from(e: EngineError) -> Self {
        AdversaryError::Engine(Box::new(e))
    }
}

/// A generated instance together with its exported role labels.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyInstance {
    pub label: String,
    pub graph: Graph,
    pub roles: BTreeMap<String, Vec<usize>>,
}

fn roles(entries: &[(&str, Vec<usize>)]) -> BTreeMap<String, Vec<usize>> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// `K_{n-1}` minus the edge `xy`, plus an isolated vertex `z`.
///
/// Canonical ids: `x = 0`, `y = 1`, the clique is `0..n-1`, `z = n-1`.
/// The optimum is 0 (disconnected), yet any two-vertex prefix can be declared
/// so that the final cut is at least `n - 3`.
pub fn gen_isolated_vertex(n: usize) -> Result<FamilyInstance, AdversaryError> {
    if n < 4 {
        return Err(AdversaryError::Infeasible(format!(
            "isolated-vertex family needs n >= 4, got {n}"
        )));
    }
    let mut pairs = Vec::new();
    for u in 0..n - 1 {
        for v in u + 1..n - 1 {
            if (u, v) != (0, 1) {
                pairs.push((u, v));
            }
        }
    }
    Ok(FamilyInstance {
        label: format!("isolated(n={n})"),
        graph: Graph::unweighted(n, pairs)?,
        roles: roles(&[
            ("x", vec![0]),
            ("y", vec![1]),
            ("z", vec![n - 1]),
            ("clique", (0..n - 1).collect()),
        ]),
    })
}

/// `K_{n-1}` plus a vertex `z` joined to `k` clique vertices; the optimum is `k`.
///
/// Canonical ids: the clique is `0..n-1`, `z = n-1`, joined to `0..k`.
pub fn gen_attached_vertex(n: usize, k: usize) -> Result<FamilyInstance, AdversaryError> {
    if k < 1 || n <= k {
        return Err(AdversaryError::Infeasible(format!(
            "attachment family needs n > k >= 1, got n={n}, k={k}"
        )));
    }
    let mut pairs = Vec::new();
    for u in 0..n - 1 {
        for v in u + 1..n - 1 {
            pairs.push((u, v));
        }
    }
    for u in 0..k {
        pairs.push((u, n - 1));
    }
    Ok(FamilyInstance {
        label: format!("attached(n={n},k={k})"),
        graph: Graph::unweighted(n, pairs)?,
        roles: roles(&[
            ("z", vec![n - 1]),
            ("z_neighbors", (0..k).collect()),
            ("clique", (0..n - 1).collect()),
        ]),
    })
}

/// Path `x1-x2-x3-x4` with an independent prefix split into S (adjacent to
/// `x1, x2`) and T (adjacent to `x3, x4`); the optimum is 1.
///
/// Canonical ids: prefix vertices are `0..n-4` (`labels[j]` true means S),
/// then `x1..x4 = n-4..n`.
pub fn gen_path_attachment(n: usize, labels: &[bool]) -> Result<FamilyInstance, AdversaryError> {
    if n < 6 {
        return Err(AdversaryError::Infeasible(format!(
            "path-attachment family needs n >= 6, got {n}"
        )));
    }
    if labels.len() != n - 4 {
        return Err(AdversaryError::Infeasible(format!(
            "expected {} labels, got {}",
            n - 4,
            labels.len()
        )));
    }
    let x1 = n - 4;
    let mut pairs = vec![(x1, x1 + 1), (x1 + 1, x1 + 2), (x1 + 2, x1 + 3)];
    let mut s = Vec::new();
    let mut t = Vec::new();
    for (j, &in_s) in labels.iter().enumerate() {
        if in_s {
            pairs.push((j, x1));
            pairs.push((j, x1 + 1));
            s.push(j);
        } else {
            pairs.push((j, x1 + 2));
            pairs.push((j, x1 + 3));
            t.push(j);
        }
    }
    Ok(FamilyInstance {
        label: format!("path-attach(n={n},|S|={},|T|={})", s.len(), t.len()),
        graph: Graph::unweighted(n, pairs)?,
        roles: roles(&[
            ("S", s),
            ("T", t),
            ("x1", vec![x1]),
            ("x2", vec![x1 + 1]),
            ("x3", vec![x1 + 2]),
            ("x4", vec![x1 + 3]),
            ("prefix", (0..n - 4).collect()),
        ]),
    })
}

/// All `2^(n-4)` prefix labelings of the path-attachment family.
pub fn path_attachment_family(n: usize) -> Result<Vec<FamilyInstance>, AdversaryError> {
    let q = n.checked_sub(4).filter(|&q| q >= 2).ok_or_else(|| {
        AdversaryError::Infeasible(format!("family needs n >= 6, got {n}"))
    })?;
    (0u64..1 << q)
        .map(|mask| gen_path_attachment(n, &(0..q).map(|j| mask >> j & 1 == 1).collect::<Vec<_>>()))
        .collect()
}

/// Two p-cliques A, B joined by `k` crossing edges, plus independent sets C
/// (complete to A) and D (complete to B); the optimum is `k`.
///
/// Canonical ids: prefix `C ∪ D` is `0..n-2p` (`labels[j]` true means C),
/// then `A = n-2p..n-p` and `B = n-p..n`. The crossing edges match the first
/// `k` vertices of A to the first `k` of B, one edge each.
///
/// Feasibility here is `p > k`, which keeps the optimum at `k`; the fooling
/// lower bound additionally wants `p > k + 1` so that a wrong partition costs
/// strictly more than `k` (see [`crate::advice::fooling_pair_search`]).
pub fn gen_clique_pair(
    n: usize,
    p: usize,
    k: usize,
    labels: &[bool],
) -> Result<FamilyInstance, AdversaryError> {
    if k < 1 || p <= k {
        return Err(AdversaryError::Infeasible(format!(
            "clique-pair family needs p > k >= 1, got p={p}, k={k}"
        )));
    }
    if n < 2 * p + 2 {
        return Err(AdversaryError::Infeasible(format!(
            "clique-pair family needs n >= 2p+2 = {}, got {n}",
            2 * p + 2
        )));
    }
    let q = n - 2 * p;
    if labels.len() != q {
        return Err(AdversaryError::Infeasible(format!(
            "expected {q} labels, got {}",
            labels.len()
        )));
    }
    let a0 = q;
    let b0 = q + p;
    let mut pairs = Vec::new();
    for u in a0..a0 + p {
        for v in u + 1..a0 + p {
            pairs.push((u, v));
        }
    }
    for u in b0..b0 + p {
        for v in u + 1..b0 + p {
            pairs.push((u, v));
        }
    }
    for i in 0..k {
        pairs.push((a0 + i, b0 + i));
    }
    let mut c = Vec::new();
    let mut d = Vec::new();
    for (j, &in_c) in labels.iter().enumerate() {
        if in_c {
            for v in a0..a0 + p {
                pairs.push((j, v));
            }
            c.push(j);
        } else {
            for v in b0..b0 + p {
                pairs.push((j, v));
            }
            d.push(j);
        }
    }
    Ok(FamilyInstance {
        label: format!("clique-pair(n={n},p={p},k={k},|C|={},|D|={})", c.len(), d.len()),
        graph: Graph::unweighted(n, pairs)?,
        roles: roles(&[
            ("A", (a0..a0 + p).collect()),
            ("B", (b0..b0 + p).collect()),
            ("Aprime", (a0..a0 + k).collect()),
            ("Bprime", (b0..b0 + k).collect()),
            ("C", c),
            ("D", d),
            ("prefix", (0..q).collect()),
        ]),
    })
}

/// All `2^(n-2p)` prefix labelings of the clique-pair family.
pub fn clique_pair_family(n: usize, p: usize, k: usize) -> Result<Vec<FamilyInstance>, AdversaryError> {
    let q = n
        .checked_sub(2 * p)
        .filter(|&q| q >= 2)
        .ok_or_else(|| AdversaryError::Infeasible(format!("need n >= 2p+2, got n={n}, p={p}")))?;
    (0u64..1 << q)
        .map(|mask| gen_clique_pair(n, p, k, &(0..q).map(|j| mask >> j & 1 == 1).collect::<Vec<_>>()))
        .collect()
}

/// Erdős–Rényi graph: each pair `(u, v)`, iterated with `u < v` ascending, is
/// included independently with probability `prob`. Bit-identical per seed.
pub fn gen_gnp(n: usize, prob: f64, seed: u64) -> Result<Graph, AdversaryError> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(AdversaryError::Infeasible(format!(
            "edge probability must lie in [0, 1], got {prob}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < prob {
                pairs.push((u, v));
            }
        }
    }
    Ok(Graph::unweighted(n, pairs)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GameVariant {
    /// Isolated-vertex family: two nonadjacent reveals, forced value >= n-3.
    A,
    /// Attachment family: two adjacent reveals, forced value >= n-2.
    B,
}

/// Transcript of one adaptive game, persisted for audit.
#[derive(Debug, Clone, Serialize)]
pub struct GameTranscript {
    pub variant: GameVariant,
    pub n: usize,
    pub k: usize,
    pub algorithm: String,
    /// Which identity declaration the adversary used after seeing the
    /// first two placements.
    pub declared_case: String,
    /// Original vertex ids in arrival order.
    pub order: Vec<usize>,
    /// Sides by arrival position.
    pub sides: Vec<Side>,
    pub graph: Graph,
    pub value: CutValue,
}

#[derive(Debug, Clone, Serialize)]
pub struct GameOutcome {
    pub value: CutValue,
    pub forced_lower_bound: f64,
    pub transcript: GameTranscript,
}

/// Plays the adaptive two-vertex game against a deterministic algorithm.
///
/// The adversary reveals two (non)adjacent vertices per the variant, watches
/// the placements, fixes vertex identities accordingly, and feeds the rest of
/// the instance in ascending id order. Variant A forces at least `n - 3`
/// (with optimum 0); variant B forces at least `n - 2` (with optimum `k`).
pub fn adaptive_two_vertex_game(
    alg: &dyn OnlineCutAlgorithm,
    variant: GameVariant,
    n: usize,
    k: usize,
) -> Result<GameOutcome, AdversaryError> {
    let instance = match variant {
        GameVariant::A => gen_isolated_vertex(n)?,
        GameVariant::B => gen_attached_vertex(n, k)?,
    };
    let g = &instance.graph;
    let mut driver = StepDriver::new(alg, None)?;
    let s1 = driver.reveal(&[])?;
    let second_edges: &[(usize, f64)] = match variant {
        GameVariant::A => &[],
        GameVariant::B => &[(0, 1.0)],
    };
    let s2 = driver.reveal(second_edges)?;

    let (id1, id2, declared_case) = match (variant, s1 == s2) {
        // nonadjacent pair on the same side: call them x and the isolated z
        (GameVariant::A, true) => (0, n - 1, "v1=x, v2=z"),
        // nonadjacent pair split: call them the missing edge's ends x and y
        (GameVariant::A, false) => (0, 1, "v1=x, v2=y"),
        // adjacent pair on the same side: call the first one z
        (GameVariant::B, true) => (n - 1, 0, "v1=z, v2 adjacent to z"),
        // adjacent pair split: neither is z
        (GameVariant::B, false) => (0, 1, "neither v1 nor v2 is z"),
    };

    let mut order = vec![id1, id2];
    order.extend((0..n).filter(|&v| v != id1 && v != id2));
    let mut edges = Vec::new();
    for i in 2..n {
        let v = order[i];
        edges.clear();
        for (j, &u) in order[..i].iter().enumerate() {
            let w = g.weight_between(v, u);
            if w > 0.0 {
                edges.push((j, w));
            }
        }
        driver.reveal(&edges)?;
    }

    let sides = driver.sides().to_vec();
    let mut assignment = CutAssignment::unassigned(n);
    for (i, &v) in order.iter().enumerate() {
        assignment.assign(v, sides[i]);
    }
    let value = cut_weight(g, &assignment)?;
    let forced_lower_bound = match variant {
        GameVariant::A => n as f64 - 3.0,
        GameVariant::B => n as f64 - 2.0,
    };
    Ok(GameOutcome {
        value,
        forced_lower_bound,
        transcript: GameTranscript {
            variant,
            n,
            k,
            algorithm: alg.name().to_string(),
            declared_case: declared_case.to_string(),
            order,
            sides,
            graph: g.clone(),
            value,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{builtin_algorithms, greedy_min, trivial_first_vertex};
    use crate::engine::run;
    use crate::graph::{degree_stats, ArrivalOrder};
    use crate::oracles::{all_optimal_bipartitions, brute_force_mincut, Sense};

    #[test]
    fn isolated_instances() {
        let inst = gen_isolated_vertex(4).unwrap();
        assert_eq!(brute_force_mincut(&inst.graph).unwrap().0, CutValue::Finite(0.0));
        assert_eq!(inst.graph.m(), 2); // C(3,2) - 1
        for n in 4..9 {
            let inst = gen_isolated_vertex(n).unwrap();
            assert_eq!(inst.graph.m(), (n - 1) * (n - 2) / 2 - 1);
            assert_eq!(
                brute_force_mincut(&inst.graph).unwrap().0,
                CutValue::Finite(0.0)
            );
        }
        assert!(gen_isolated_vertex(3).is_err());
    }

    #[test]
    fn isolated_second_smallest_cut_when_z_sits_with_x() {
        // grouping z with x, the cheapest completion still cuts n-3 edges
        let n = 5;
        let inst = gen_isolated_vertex(n).unwrap();
        let g = &inst.graph;
        let mut best = f64::INFINITY;
        for mask in 1u64..(1 << (n - 1)) {
            let x_mask = ((1u64 << n) - 1) & !(mask << 1);
            // require x (id 0) and z (id n-1) together in X, Y nonempty
            if x_mask & 1 == 1 && x_mask >> (n - 1) & 1 == 1 {
                best = best.min(crate::oracles::cut_value_of_mask(g, x_mask));
            }
        }
        assert_eq!(best, (n - 3) as f64);
    }

    #[test]
    fn attached_instances() {
        let inst = gen_attached_vertex(8, 2).unwrap();
        assert_eq!(brute_force_mincut(&inst.graph).unwrap().0, CutValue::Finite(2.0));
        assert_eq!(degree_stats(&inst.graph).unwrap().degrees[7], 2.0);
        let inst = gen_attached_vertex(6, 1).unwrap();
        assert_eq!(brute_force_mincut(&inst.graph).unwrap().0, CutValue::Finite(1.0));
        assert!(gen_attached_vertex(3, 3).is_err());
        assert!(gen_attached_vertex(5, 0).is_err());
    }

    #[test]
    fn trivial_algorithm_is_optimal_when_z_arrives_first() {
        let inst = gen_attached_vertex(8, 2).unwrap();
        let z = inst.roles["z"][0];
        let mut ids = vec![z];
        ids.extend((0..8).filter(|&v| v != z));
        let order = ArrivalOrder::new(ids).unwrap();
        let rec = run(&inst.graph, &order, trivial_first_vertex().as_ref(), None).unwrap();
        assert_eq!(rec.value, CutValue::Finite(2.0));
        assert_eq!(rec.value, brute_force_mincut(&inst.graph).unwrap().0);
    }

    #[test]
    fn path_attachment_instances() {
        let inst = gen_path_attachment(8, &[true, true, false, false]).unwrap();
        let g = &inst.graph;
        let (opt, _) = brute_force_mincut(g).unwrap();
        assert_eq!(opt, CutValue::Finite(1.0));
        // unique optimal partition: S side vs T side
        let masks = all_optimal_bipartitions(g, Sense::Min).unwrap();
        assert_eq!(masks.len(), 1);
        let expect = CutAssignment::from_x_set(8, [0, 1, 4, 5]);
        assert!(CutAssignment::from_x_mask(8, masks[0]).same_bipartition(&expect));
        // every S vertex has degree 2
        for &s in &inst.roles["S"] {
            assert_eq!(g.weighted_degree(s), 2.0);
        }
        let inst = gen_path_attachment(6, &[true, true]).unwrap();
        assert_eq!(brute_force_mincut(&inst.graph).unwrap().0, CutValue::Finite(1.0));
        assert!(gen_path_attachment(5, &[true]).is_err());
    }

    #[test]
    fn path_attachment_optimum_unique_for_proper_splits() {
        for n in [8usize, 10] {
            for inst in path_attachment_family(n).unwrap() {
                let s = inst.roles["S"].len();
                if s == 0 || s == n - 4 {
                    continue; // one-sided labelings admit tied optima
                }
                let masks = all_optimal_bipartitions(&inst.graph, Sense::Min).unwrap();
                assert_eq!(masks.len(), 1, "{}", inst.label);
            }
        }
    }

    #[test]
    fn clique_pair_instances() {
        let inst = gen_clique_pair(12, 4, 2, &[true, true, false, false]).unwrap();
        let g = &inst.graph;
        assert_eq!(g.m(), 30);
        assert_eq!(brute_force_mincut(g).unwrap().0, CutValue::Finite(2.0));
        // cutting one C vertex off costs p
        let c0 = inst.roles["C"][0];
        assert_eq!(g.weighted_degree(c0), 4.0);

        let inst = gen_clique_pair(12, 4, 1, &[true, true, true, false]).unwrap();
        assert_eq!(brute_force_mincut(&inst.graph).unwrap().0, CutValue::Finite(1.0));
        assert!(gen_clique_pair(12, 4, 4, &[true; 4]).is_err());
        assert!(gen_clique_pair(8, 4, 1, &[]).is_err());
    }

    #[test]
    fn clique_pair_family_covers_all_labelings() {
        let family = clique_pair_family(12, 4, 2).unwrap();
        assert_eq!(family.len(), 16);
        for inst in &family {
            assert_eq!(
                brute_force_mincut(&inst.graph).unwrap().0,
                CutValue::Finite(2.0),
                "{}",
                inst.label
            );
        }
    }

    #[test]
    fn gnp_extremes_and_determinism() {
        assert_eq!(gen_gnp(10, 0.0, 1).unwrap().m(), 0);
        assert_eq!(gen_gnp(10, 1.0, 1).unwrap().m(), 45);
        assert_eq!(gen_gnp(30, 0.3, 42).unwrap(), gen_gnp(30, 0.3, 42).unwrap());
        assert_ne!(gen_gnp(30, 0.3, 42).unwrap(), gen_gnp(30, 0.3, 43).unwrap());
        assert!(gen_gnp(5, 1.5, 0).is_err());
    }

    #[test]
    fn adaptive_game_forces_large_cuts() {
        let out = adaptive_two_vertex_game(trivial_first_vertex().as_ref(), GameVariant::B, 10, 2)
            .unwrap();
        assert!(out.value.finite() >= 8.0);
        let out = adaptive_two_vertex_game(greedy_min().as_ref(), GameVariant::A, 8, 1).unwrap();
        assert!(out.value.finite() >= 5.0);
        // degenerate minimum case n = k + 2
        let out = adaptive_two_vertex_game(trivial_first_vertex().as_ref(), GameVariant::B, 5, 3)
            .unwrap();
        assert!(out.value.finite() >= 3.0);
    }

    #[test]
    fn adaptive_game_bound_for_all_builtins() {
        for n in 6..=10usize {
            for alg in builtin_algorithms() {
                let a = adaptive_two_vertex_game(alg.as_ref(), GameVariant::A, n, 1).unwrap();
                assert!(
                    a.value.finite() >= (n - 3) as f64,
                    "variant a, n={n}, {}: {}",
                    alg.name(),
                    a.value
                );
                let b = adaptive_two_vertex_game(alg.as_ref(), GameVariant::B, n, 2).unwrap();
                assert!(
                    b.value.finite() >= (n - 2) as f64,
                    "variant b, n={n}, {}: {}",
                    alg.name(),
                    b.value
                );
            }
        }
    }

    #[test]
    fn transcript_replays_through_the_engine() {
        for alg in builtin_algorithms() {
            let out = adaptive_two_vertex_game(alg.as_ref(), GameVariant::B, 9, 2).unwrap();
            let t = &out.transcript;
            let order = ArrivalOrder::new(t.order.clone()).unwrap();
            let rec = run(&t.graph, &order, alg.as_ref(), None).unwrap();
            let replayed: Vec<Side> = (0..t.n)
                .map(|i| rec.assignment.side(t.order[i]).unwrap())
                .collect();
            assert_eq!(replayed, t.sides);
            assert_eq!(rec.value, t.value);
        }
    }

    #[test]
    fn competitive_bound_instantiated_for_trivial_algorithm() {
        use crate::engine::{worst_case_value, SearchMode};
        // k-edge-connected test graphs: worst case <= n-1 <= ((n-1)/k) opt
        let cases = [
            (Graph::cycle(6), 2.0),
            (Graph::complete(5), 4.0),
            (gen_attached_vertex(7, 2).unwrap().graph, 2.0),
        ];
        for (g, k) in cases {
            let n = g.n() as f64;
            let opt = brute_force_mincut(&g).unwrap().0.finite();
            assert!(opt >= k);
            let worst = worst_case_value(&g, trivial_first_vertex().as_ref(), SearchMode::Exhaustive)
                .unwrap();
            assert!(worst.value.finite() <= n - 1.0);
            assert!(n - 1.0 <= (n - 1.0) / k * opt + 1e-12);
        }
    }
}
