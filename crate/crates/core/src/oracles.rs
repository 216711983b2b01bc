//! Exact offline optima used as ground truth: brute-force min/max cut over all
//! bipartitions, a Stoer–Wagner cross-check for larger graphs, and exhaustive
//! optimization of set functions on small ground sets.

use crate::graph::{
    cut_weight, weight_eq, CutAssignment, CutValue, Graph, GraphError, Side,
};
use thiserror::Error;

/// Bipartition enumeration cap: 2^23 cuts at n = 24 stays in the seconds range.
pub const ENUM_CAP: usize = 24;
/// Ground-set cap for exhaustive set-function optimization.
pub const SET_CAP: usize = 24;
/// Ground-set cap for the submodularity checker.
pub const SUBMOD_CHECK_CAP: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("graph has {n} vertices, enumeration capped at {cap}")]
    Capacity { n: usize, cap: usize },
    #[error("operation needs at least two vertices")]
    NeedTwoVertices,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("value table has {got} entries, expected {want}")]
    TableSize { got: usize, want: usize },
    #[error("instance {0}: optimal partitions disagree on the prefix restriction")]
    AmbiguousRestriction(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Minimization or maximization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

/// Exact global minimum cut by enumerating all `2^(n-1) - 1` bipartitions
/// with vertex 0 on side X. Ties break toward the smallest X-side bitmask.
///
/// Returns `Infinite` for a single-vertex graph.
pub fn brute_force_mincut(g: &Graph) -> Result<(CutValue, CutAssignment), OracleError> {
    if g.n() == 0 {
        return Err(OracleError::EmptyGraph);
    }
    if g.n() == 1 {
        return Ok((CutValue::Infinite, CutAssignment::from_x_set(1, [0])));
    }
    let (value, mask) = enumerate_best(g, Sense::Min)?;
    Ok((
        CutValue::Finite(value),
        CutAssignment::from_x_mask(g.n(), mask),
    ))
}

/// Exact global maximum cut (empty sides excluded); same tie rule as the
/// minimum-cut enumeration.
pub fn brute_force_maxcut(g: &Graph) -> Result<(CutValue, CutAssignment), OracleError> {
    if g.n() < 2 {
        return Err(OracleError::NeedTwoVertices);
    }
    let (value, mask) = enumerate_best(g, Sense::Max)?;
    Ok((
        CutValue::Finite(value),
        CutAssignment::from_x_mask(g.n(), mask),
    ))
}

fn enumerate_best(g: &Graph, sense: Sense) -> Result<(f64, u64), OracleError> {
    let n = g.n();
    if n > ENUM_CAP {
        return Err(OracleError::Capacity { n, cap: ENUM_CAP });
    }
    let full = (1u64 << n) - 1;
    let mut best = match sense {
        Sense::Min => f64::INFINITY,
        Sense::Max => f64::NEG_INFINITY,
    };
    let mut best_mask = full;
    for y_mask in 1u64..1 << (n - 1) {
        // vertex v >= 1 is in Y iff bit v-1 of y_mask is set; vertex 0 is in X
        let x_mask = full & !(y_mask << 1);
        let value = cut_value_of_mask(g, x_mask);
        let better = match sense {
            Sense::Min => value < best,
            Sense::Max => value > best,
        };
        if better || (value == best && x_mask < best_mask) {
            best = value;
            best_mask = x_mask;
        }
    }
    Ok((best, best_mask))
}

/// Cut value of the bipartition given by an X-side bitmask.
pub fn cut_value_of_mask(g: &Graph, x_mask: u64) -> f64 {
    let mut total = 0.0;
    for e in g.edges() {
        if (x_mask >> e.u ^ x_mask >> e.v) & 1 == 1 {
            total += e.w;
        }
    }
    total
}

/// All optimal bipartitions as X-side bitmasks (vertex 0 in X), ascending.
/// Values within [`crate::graph::WEIGHT_EPS`] of the optimum count as optimal.
pub fn all_optimal_bipartitions(g: &Graph, sense: Sense) -> Result<Vec<u64>, OracleError> {
    if g.n() < 2 {
        return Err(OracleError::NeedTwoVertices);
    }
    let n = g.n();
    if n > ENUM_CAP {
        return Err(OracleError::Capacity { n, cap: ENUM_CAP });
    }
    let (best, _) = enumerate_best(g, sense)?;
    let full = (1u64 << n) - 1;
    let mut masks = Vec::new();
    for y_mask in 1u64..1 << (n - 1) {
        let x_mask = full & !(y_mask << 1);
        if weight_eq(cut_value_of_mask(g, x_mask), best) {
            masks.push(x_mask);
        }
    }
    masks.sort_unstable();
    Ok(masks)
}

/// Stoer–Wagner global minimum cut. Deterministic: every maximum-adjacency
/// search starts at the smallest active vertex and breaks ties toward the
/// smallest id, and the first phase attaining the minimum supplies the witness.
pub fn stoer_wagner_mincut(g: &Graph) -> Result<(CutValue, CutAssignment), OracleError> {
    let n = g.n();
    if n < 2 {
        return Err(OracleError::NeedTwoVertices);
    }
    let mut w = vec![vec![0.0f64; n]; n];
    for e in g.edges() {
        w[e.u][e.v] += e.w;
        w[e.v][e.u] += e.w;
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut group: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut best_value = f64::INFINITY;
    let mut best_side: Vec<usize> = Vec::new();

    while active.len() > 1 {
        // maximum-adjacency search from the smallest active vertex
        let start = active[0];
        let mut in_a = vec![false; n];
        in_a[start] = true;
        let mut key: Vec<f64> = (0..n).map(|v| w[start][v]).collect();
        let mut prev = start;
        let mut last = start;
        for _ in 1..active.len() {
            let mut pick = usize::MAX;
            let mut pick_key = f64::NEG_INFINITY;
            for &v in &active {
                if !in_a[v] && key[v] > pick_key {
                    pick = v;
                    pick_key = key[v];
                }
            }
            in_a[pick] = true;
            prev = last;
            last = pick;
            for &v in &active {
                if !in_a[v] {
                    key[v] += w[pick][v];
                }
            }
        }
        let phase_value = key[last];
        if phase_value < best_value {
            best_value = phase_value;
            best_side = group[last].clone();
        }
        // merge last into prev
        #[allow(clippy::needless_range_loop)]
        for v in 0..n {
            w[prev][v] += w[last][v];
            w[v][prev] = w[prev][v];
        }
        w[prev][prev] = 0.0;
        let moved = std::mem::take(&mut group[last]);
        group[prev].extend(moved);
        active.retain(|&v| v != last);
    }

    let mut witness = CutAssignment::from_x_set(n, best_side.iter().copied());
    if witness.side(0) == Some(Side::Y) {
        witness = witness.swapped();
    }
    debug_assert!(weight_eq(
        cut_weight(g, &witness).unwrap().finite(),
        best_value
    ));
    Ok((CutValue::Finite(best_value), witness))
}

/// A real-valued set function on a ground set of at most [`SET_CAP`] elements,
/// given either as a dense value table or a callback.
pub struct SetFunction {
    ground: usize,
    repr: Repr,
}

enum Repr {
    Table(Vec<f64>),
    Callback(Box<dyn Fn(u32) -> f64 + Send + Sync>),
}

impl SetFunction {
    /// Dense table indexed by subset bitmask; must have exactly `2^ground` entries.
    pub fn from_table(ground: usize, table: Vec<f64>) -> Result<SetFunction, OracleError> {
        if ground > SET_CAP {
            return Err(OracleError::Capacity {
                n: ground,
                cap: SET_CAP,
            });
        }
        if table.len() != 1 << ground {
            return Err(OracleError::TableSize {
                got: table.len(),
                want: 1 << ground,
            });
        }
        Ok(SetFunction {
            ground,
            repr: Repr::Table(table),
        })
    }

    pub fn from_fn(
        ground: usize,
        f: impl Fn(u32) -> f64 + Send + Sync + 'static,
    ) -> Result<SetFunction, OracleError> {
        if ground > SET_CAP {
            return Err(OracleError::Capacity {
                n: ground,
                cap: SET_CAP,
            });
        }
        Ok(SetFunction {
            ground,
            repr: Repr::Callback(Box::new(f)),
        })
    }

    /// The cut function of a graph: ground set = vertices, `f(S)` = weight
    /// crossing between `S` and its complement. Submodular; 0 at both ends.
    pub fn cut_function(g: &Graph) -> Result<SetFunction, OracleError> {
        let edges: Vec<(usize, usize, f64)> =
            g.edges().iter().map(|e| (e.u, e.v, e.w)).collect();
        SetFunction::from_fn(g.n(), move |mask| {
            edges
                .iter()
                .filter(|&&(u, v, _)| (mask >> u ^ mask >> v) & 1 == 1)
                .map(|&(_, _, w)| w)
                .sum()
        })
    }

    /// Coverage function: element `i` covers the universe bitmask `sets[i]`;
    /// `f(S)` counts the covered universe points. Monotone submodular.
    pub fn coverage(sets: Vec<u64>) -> Result<SetFunction, OracleError> {
        let ground = sets.len();
        SetFunction::from_fn(ground, move |mask| {
            let mut covered = 0u64;
            for (i, &s) in sets.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    covered |= s;
                }
            }
            covered.count_ones() as f64
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn value(&self, mask: u32) -> f64 {
        debug_assert!(mask < (1u32 << self.ground) || self.ground == 32);
        match &self.repr {
            Repr::Table(t) => t[mask as usize],
            Repr::Callback(f) => f(mask),
        }
    }
}

/// Checks submodularity by all pairwise inequalities
/// `f(X+y) + f(X+z) >= f(X) + f(X+y+z)`; capped at [`SUBMOD_CHECK_CAP`] elements.
pub fn is_submodular(f: &SetFunction) -> Result<bool, OracleError> {
    let k = f.ground_size();
    if k > SUBMOD_CHECK_CAP {
        return Err(OracleError::Capacity {
            n: k,
            cap: SUBMOD_CHECK_CAP,
        });
    }
    for mask in 0u32..1 << k {
        for y in 0..k {
            if mask >> y & 1 == 1 {
                continue;
            }
            for z in y + 1..k {
                if mask >> z & 1 == 1 {
                    continue;
                }
                let lhs = f.value(mask | 1 << y) + f.value(mask | 1 << z);
                let rhs = f.value(mask) + f.value(mask | 1 << y | 1 << z);
                if lhs < rhs - crate::graph::WEIGHT_EPS {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Exact optimum of a set function over all subsets, including the empty set
/// and the full ground set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetOptimum {
    pub value: f64,
    /// Numerically smallest optimal subset.
    pub witness: u32,
    /// An inclusion-maximal optimal subset, found by upward closure from the witness.
    pub maximal_witness: u32,
}

pub fn brute_force_set_optimum(f: &SetFunction, sense: Sense) -> Result<SetOptimum, OracleError> {
    let k = f.ground_size();
    if k > SET_CAP {
        return Err(OracleError::Capacity { n: k, cap: SET_CAP });
    }
    let mut best = f.value(0);
    let mut witness = 0u32;
    for mask in 1u32..(1u64 << k) as u32 {
        let v = f.value(mask);
        let better = match sense {
            Sense::Min => v < best,
            Sense::Max => v > best,
        };
        if better {
            best = v;
            witness = mask;
        }
    }
    let mut maximal = witness;
    loop {
        let mut grew = false;
        for e in 0..k {
            if maximal >> e & 1 == 0 && weight_eq(f.value(maximal | 1 << e), best) {
                maximal |= 1 << e;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    Ok(SetOptimum {
        value: best,
        witness,
        maximal_witness: maximal,
    })
}

/// Restriction of an instance's optimal partitions to a shared prefix,
/// normalized modulo a global side swap: bit `j` is set iff `prefix[j]` sits
/// on the same side as `prefix[0]`.
///
/// Errors if the instance has optimal partitions whose prefix restrictions
/// disagree, so the choice among optima is never made silently.
pub fn consistent_restriction(g: &Graph, prefix: &[usize]) -> Result<u64, OracleError> {
    assert!(prefix.len() <= 64, "prefix longer than 64 vertices");
    for &v in prefix {
        if v >= g.n() {
            return Err(OracleError::Graph(GraphError::VertexOutOfRange {
                id: v,
                n: g.n(),
            }));
        }
    }
    let masks = all_optimal_bipartitions(g, Sense::Min)?;
    let mut sig: Option<u64> = None;
    for mask in masks {
        let mut s = 0u64;
        if !prefix.is_empty() {
            let anchor = mask >> prefix[0] & 1;
            for (j, &v) in prefix.iter().enumerate() {
                if mask >> v & 1 == anchor {
                    s |= 1 << j;
                }
            }
        }
        match sig {
            None => sig = Some(s),
            Some(prev) if prev != s => return Err(OracleError::AmbiguousRestriction(0)),
            Some(_) => {}
        }
    }
    Ok(sig.expect("a graph with n >= 2 has at least one bipartition"))
}

/// Number of pairwise-distinct optimal-partition restrictions to the shared
/// prefix, modulo global side swap, across a family of instances.
pub fn count_distinct_restricted_optima(
    instances: &[Graph],
    prefix: &[usize],
) -> Result<usize, OracleError> {
    let mut seen = std::collections::BTreeSet::new();
    for (idx, g) in instances.iter().enumerate() {
        let sig = consistent_restriction(g, prefix).map_err(|e| match e {
            OracleError::AmbiguousRestriction(_) => OracleError::AmbiguousRestriction(idx),
            other => other,
        })?;
        seen.insert(sig);
    }
    Ok(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cut_weight;
    use rand::Rng;
    use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

    fn random_graph(n: usize, p: f64, weighted: bool, seed: u64) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut triples = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    let w = if weighted {
                        rng.gen_range(0.1..3.0)
                    } else {
                        1.0
                    };
                    triples.push((u, v, w));
                }
            }
        }
        Graph::new(n, triples).unwrap()
    }

    #[test]
    fn mincut_of_cycle_is_two() {
        let (v, a) = brute_force_mincut(&Graph::cycle(5)).unwrap();
        assert_eq!(v, CutValue::Finite(2.0));
        assert!(a.is_valid_cut());
    }

    #[test]
    fn mincut_of_disjoint_edges_is_zero() {
        let g = Graph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        let (v, _) = brute_force_mincut(&g).unwrap();
        assert_eq!(v, CutValue::Finite(0.0));
    }

    #[test]
    fn single_vertex_mincut_is_infinite() {
        let (v, _) = brute_force_mincut(&Graph::empty(1)).unwrap();
        assert!(v.is_infinite());
    }

    #[test]
    fn capacity_errors() {
        let g = Graph::empty(25);
        assert!(matches!(
            brute_force_mincut(&g),
            Err(OracleError::Capacity { .. })
        ));
        assert!(stoer_wagner_mincut(&Graph::empty(1)).is_err());
    }

    #[test]
    fn stoer_wagner_cycle() {
        let (v, a) = stoer_wagner_mincut(&Graph::cycle(5)).unwrap();
        assert_eq!(v, CutValue::Finite(2.0));
        assert_eq!(cut_weight(&Graph::cycle(5), &a).unwrap(), v);
    }

    #[test]
    fn stoer_wagner_matches_brute_force_on_seeded_graphs() {
        for seed in 0..60u64 {
            let n = 2 + (seed as usize * 7) % 11;
            let g = random_graph(n, 0.5, seed % 3 == 0, seed);
            let (bv, bw) = brute_force_mincut(&g).unwrap();
            let (sv, sw) = stoer_wagner_mincut(&g).unwrap();
            assert!(
                weight_eq(bv.finite(), sv.finite()),
                "seed {seed}: {bv} vs {sv}"
            );
            // witnesses attain their reported values
            assert_eq!(cut_weight(&g, &bw).unwrap(), bv);
            assert!(weight_eq(cut_weight(&g, &sw).unwrap().finite(), sv.finite()));
        }
    }

    #[test]
    fn stoer_wagner_matches_on_g12_seed7() {
        let g = random_graph(12, 0.5, false, 7);
        let (bv, _) = brute_force_mincut(&g).unwrap();
        let (sv, _) = stoer_wagner_mincut(&g).unwrap();
        assert_eq!(bv, sv);
    }

    #[test]
    fn maxcut_examples() {
        assert_eq!(
            brute_force_maxcut(&Graph::complete(4)).unwrap().0,
            CutValue::Finite(4.0)
        );
        assert_eq!(
            brute_force_maxcut(&Graph::cycle(5)).unwrap().0,
            CutValue::Finite(4.0)
        );
        assert_eq!(
            brute_force_maxcut(&Graph::path(3)).unwrap().0,
            CutValue::Finite(2.0)
        );
    }

    #[test]
    fn mincut_bounded_by_min_degree_and_zero_iff_disconnected() {
        for seed in 100..140u64 {
            let n = 2 + (seed as usize) % 9;
            let g = random_graph(n, 0.4, false, seed);
            let (v, _) = brute_force_mincut(&g).unwrap();
            let stats = crate::graph::degree_stats(&g).unwrap();
            assert!(v.finite() <= stats.min_degree + 1e-12);
            assert_eq!(v.finite() == 0.0, !g.is_connected());
        }
    }

    #[test]
    fn maxcut_at_least_half_total_weight() {
        for seed in 200..230u64 {
            let n = 2 + (seed as usize) % 8;
            let g = random_graph(n, 0.6, true, seed);
            let (v, w) = brute_force_maxcut(&g).unwrap();
            assert!(v.finite() >= g.total_weight() / 2.0 - 1e-9);
            assert!(weight_eq(cut_weight(&g, &w).unwrap().finite(), v.finite()));
        }
    }

    #[test]
    fn tie_break_smallest_x_mask() {
        // P4 has two mincuts of value 1; {0} has the smallest X-mask
        let (v, a) = brute_force_mincut(&Graph::path(4)).unwrap();
        assert_eq!(v, CutValue::Finite(1.0));
        assert_eq!(a.x_mask(), 0b0001);
        let masks = all_optimal_bipartitions(&Graph::path(4), Sense::Min).unwrap();
        assert_eq!(masks, vec![0b0001, 0b0011, 0b0111]);
    }

    #[test]
    fn counterexample_set_function() {
        // f(0)=0, f({x})=f({y})=1, f(E)=-1
        let f = SetFunction::from_table(2, vec![0.0, 1.0, 1.0, -1.0]).unwrap();
        assert!(is_submodular(&f).unwrap());
        let max = brute_force_set_optimum(&f, Sense::Max).unwrap();
        assert_eq!(max.value, 1.0);
        assert_eq!(max.witness, 0b01);
        assert_eq!(max.maximal_witness, 0b01);
        let min = brute_force_set_optimum(&f, Sense::Min).unwrap();
        assert_eq!(min.value, -1.0);
        assert_eq!(min.witness, 0b11);
    }

    #[test]
    fn cut_function_of_p3() {
        let f = SetFunction::cut_function(&Graph::path(3)).unwrap();
        assert!(is_submodular(&f).unwrap());
        let opt = brute_force_set_optimum(&f, Sense::Max).unwrap();
        assert_eq!(opt.value, 2.0);
        assert_eq!(opt.witness, 0b010); // the center alone
    }

    #[test]
    fn coverage_is_submodular_and_monotone() {
        let f = SetFunction::coverage(vec![0b0111, 0b1100, 0b1010]).unwrap();
        assert!(is_submodular(&f).unwrap());
        assert_eq!(f.value(0b111), 4.0);
        let opt = brute_force_set_optimum(&f, Sense::Max).unwrap();
        assert_eq!(opt.value, 4.0);
        assert_eq!(opt.maximal_witness, 0b111);
    }

    #[test]
    fn restriction_consistent_across_tied_optima() {
        // P3 has two mincuts but both keep vertex 0's prefix restriction trivial
        let count = count_distinct_restricted_optima(&[Graph::path(3)], &[0]).unwrap();
        assert_eq!(count, 1);
    }

    #[test]
    fn restriction_reports_genuine_ambiguity() {
        // C4 mincuts {0} and {0,1} place vertices 0,1 apart or together
        let err = count_distinct_restricted_optima(&[Graph::cycle(4)], &[0, 1]).unwrap_err();
        assert_eq!(err, OracleError::AmbiguousRestriction(0));
    }
}
