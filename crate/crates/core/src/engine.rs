//! The vertex-arrival execution loop and the three evaluation functionals
//! (worst case, best case, random order).
//!
//! Algorithms never see original vertex ids. A run presents each arrival as
//! the next position `0, 1, 2, ...` together with its edges into previously
//! revealed positions, so decisions can depend only on the revealed prefix,
//! the algorithm's own state, and consumed advice bits.

use crate::advice::{AdviceError, AdviceReader, AdviceTape};
use crate::graph::{cut_weight, ArrivalOrder, CutAssignment, CutValue, Graph, GraphError, Side};
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use serde::Serialize;
use thiserror::Error;

/// Order-enumeration cap: 9! = 362,880 runs.
pub const EXHAUSTIVE_CAP: usize = 9;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("algorithm declares advice use but no tape was supplied")]
    MissingTape,
    #[error("algorithm does not use advice but a tape was supplied")]
    UnexpectedTape,
    #[error("revealed edge references position {pos} but only {revealed} vertices are revealed")]
    BadReveal { pos: usize, revealed: usize },
    #[error("exhaustive mode capped at n <= {cap}, graph has {n} vertices")]
    ExhaustiveCapacity { n: usize, cap: usize },
    #[error("Monte-Carlo mode needs at least one sample")]
    ZeroSamples,
    #[error("functional is not defined for advice-consuming algorithms")]
    AdviceAlgorithm,
    #[error(transparent)]
    Advice(#[from] AdviceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// What a strategy sees when the `index`-th vertex (1-based) arrives.
pub struct StepContext<'a> {
    /// 1-based arrival index of the new vertex.
    pub index: usize,
    /// Adjacency among previously revealed positions (`index - 1` of them).
    pub prior_adj: &'a [Vec<(usize, f64)>],
    /// Sides chosen for previously revealed positions.
    pub prior_sides: &'a [Side],
    /// Edges from the new vertex into prior positions, ascending by position.
    pub new_edges: &'a [(usize, f64)],
}

impl StepContext<'_> {
    /// Total weight from the new vertex to prior vertices on `side`.
    pub fn crossing_to(&self, side: Side) -> f64 {
        self.new_edges
            .iter()
            .filter(|&&(p, _)| self.prior_sides[p] == side)
            .map(|&(_, w)| w)
            .sum()
    }
}

/// Per-run state machine of an online algorithm.
pub trait CutStrategy {
    /// Irrevocably decide the side of the newly revealed vertex.
    fn place(
        &mut self,
        ctx: &StepContext<'_>,
        advice: Option<&mut AdviceReader<'_>>,
    ) -> Result<Side, EngineError>;
}

/// An online cut algorithm: a label plus a factory for per-run strategies.
pub trait OnlineCutAlgorithm {
    fn name(&self) -> &'static str;
    fn uses_advice(&self) -> bool {
        false
    }
    fn begin(&self) -> Box<dyn CutStrategy>;
}

/// One step of a completed run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    /// Original vertex id.
    pub vertex: usize,
    /// 0-based arrival position.
    pub position: usize,
    pub side: Side,
    /// Crossing weight from this vertex to the X side at decision time.
    pub cross_x: f64,
    /// Crossing weight from this vertex to the Y side at decision time.
    pub cross_y: f64,
}

/// The outcome of one online run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub order: ArrivalOrder,
    pub assignment: CutAssignment,
    pub value: CutValue,
    pub advice_bits: usize,
    pub steps: Vec<StepRecord>,
}

/// Incremental reveal loop. [`run`] drives it with a fixed `(graph, order)`;
/// adaptive adversaries drive it directly, inventing the instance as they go.
pub struct StepDriver<'t> {
    strategy: Box<dyn CutStrategy>,
    adj: Vec<Vec<(usize, f64)>>,
    sides: Vec<Side>,
    cross_log: Vec<(f64, f64)>,
    reader: Option<AdviceReader<'t>>,
}

impl<'t> StepDriver<'t> {
    pub fn new(
        alg: &dyn OnlineCutAlgorithm,
        tape: Option<&'t AdviceTape>,
    ) -> Result<StepDriver<'t>, EngineError> {
        match (alg.uses_advice(), tape.is_some()) {
            (true, false) => return Err(EngineError::MissingTape),
            (false, true) => return Err(EngineError::UnexpectedTape),
            _ => {}
        }
        Ok(StepDriver {
            strategy: alg.begin(),
            adj: Vec::new(),
            sides: Vec::new(),
            cross_log: Vec::new(),
            reader: tape.map(AdviceReader::new),
        })
    }

    /// Reveals the next vertex with its edges into prior positions and
    /// returns the algorithm's irrevocable decision.
    pub fn reveal(&mut self, new_edges: &[(usize, f64)]) -> Result<Side, EngineError> {
        let revealed = self.sides.len();
        for &(p, _) in new_edges {
            if p >= revealed {
                return Err(EngineError::BadReveal { pos: p, revealed });
            }
        }
        let ctx = StepContext {
            index: revealed + 1,
            prior_adj: &self.adj,
            prior_sides: &self.sides,
            new_edges,
        };
        let cross_x = ctx.crossing_to(Side::X);
        let cross_y = ctx.crossing_to(Side::Y);
        let side = self.strategy.place(&ctx, self.reader.as_mut())?;
        self.adj.push(new_edges.to_vec());
        for &(p, w) in new_edges {
            self.adj[p].push((revealed, w));
        }
        self.sides.push(side);
        self.cross_log.push((cross_x, cross_y));
        Ok(side)
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn advice_bits(&self) -> usize {
        self.reader.as_ref().map_or(0, |r| r.consumed())
    }

    fn finish(self) -> (Vec<Side>, Vec<(f64, f64)>, usize) {
        let bits = self.advice_bits();
        (self.sides, self.cross_log, bits)
    }
}

/// Executes one online run. Deterministic given `(g, order, alg, tape)`.
pub fn run(
    g: &Graph,
    order: &ArrivalOrder,
    alg: &dyn OnlineCutAlgorithm,
    tape: Option<&AdviceTape>,
) -> Result<RunRecord, EngineError> {
    if order.len() != g.n() {
        return Err(EngineError::Graph(GraphError::SizeMismatch {
            got: order.len(),
            want: g.n(),
        }));
    }
    let mut driver = StepDriver::new(alg, tape)?;
    let mut pos_of = vec![usize::MAX; g.n()];
    let mut scratch = Vec::new();
    for (i, &v) in order.as_slice().iter().enumerate() {
        scratch.clear();
        for &(u, w) in g.neighbors(v) {
            if pos_of[u] != usize::MAX {
                scratch.push((pos_of[u], w));
            }
        }
        scratch.sort_unstable_by_key(|&(p, _)| p);
        driver.reveal(&scratch)?;
        pos_of[v] = i;
    }
    let (sides, cross_log, advice_bits) = driver.finish();
    let mut assignment = CutAssignment::unassigned(g.n());
    for (i, &v) in order.as_slice().iter().enumerate() {
        assignment.assign(v, sides[i]);
    }
    let value = cut_weight(g, &assignment)?;
    let steps = order
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &v)| StepRecord {
            vertex: v,
            position: i,
            side: sides[i],
            cross_x: cross_log[i].0,
            cross_y: cross_log[i].1,
        })
        .collect();
    Ok(RunRecord {
        algorithm: alg.name().to_string(),
        order: order.clone(),
        assignment,
        value,
        advice_bits,
        steps,
    })
}

/// Value-only run used by the enumeration functionals. The final value is
/// recomputed over the stored edge list, so it matches [`run`] bit for bit.
fn run_value(
    g: &Graph,
    order: &[usize],
    alg: &dyn OnlineCutAlgorithm,
) -> Result<CutValue, EngineError> {
    let mut driver = StepDriver::new(alg, None)?;
    let mut pos_of = vec![usize::MAX; g.n()];
    let mut scratch = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        scratch.clear();
        for &(u, w) in g.neighbors(v) {
            if pos_of[u] != usize::MAX {
                scratch.push((pos_of[u], w));
            }
        }
        scratch.sort_unstable_by_key(|&(p, _)| p);
        driver.reveal(&scratch)?;
        pos_of[v] = i;
    }
    if g.n() == 1 {
        return Ok(CutValue::Infinite);
    }
    let sides = driver.sides();
    let side_of = |v: usize| sides[pos_of[v]];
    if !(0..g.n()).any(|v| side_of(v) == Side::X) || !(0..g.n()).any(|v| side_of(v) == Side::Y) {
        return Err(EngineError::Graph(GraphError::EmptySide));
    }
    let mut total = 0.0;
    for e in g.edges() {
        if side_of(e.u) != side_of(e.v) {
            total += e.w;
        }
    }
    Ok(CutValue::Finite(total))
}

/// How an extreme-case functional searched the order space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SearchMode {
    /// All `n!` orders; the result is exact.
    Exhaustive,
    /// Seeded sample; the result only bounds the true extreme.
    Sampled { samples: usize, seed: u64 },
}

/// Result of a worst- or best-case search, tagged with its mode so sampled
/// bounds are never mistaken for exact values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub value: CutValue,
    pub witness: ArrivalOrder,
    pub mode: SearchMode,
    pub exact: bool,
}

/// `max` over arrival orders of the algorithm's cut value.
pub fn worst_case_value(
    g: &Graph,
    alg: &dyn OnlineCutAlgorithm,
    mode: SearchMode,
) -> Result<CaseReport, EngineError> {
    extreme_case(g, alg, mode, true)
}

/// `min` over arrival orders of the algorithm's cut value.
pub fn best_case_value(
    g: &Graph,
    alg: &dyn OnlineCutAlgorithm,
    mode: SearchMode,
) -> Result<CaseReport, EngineError> {
    extreme_case(g, alg, mode, false)
}

fn extreme_case(
    g: &Graph,
    alg: &dyn OnlineCutAlgorithm,
    mode: SearchMode,
    maximize: bool,
) -> Result<CaseReport, EngineError> {
    if alg.uses_advice() {
        return Err(EngineError::AdviceAlgorithm);
    }
    let n = g.n();
    if n == 0 {
        return Err(EngineError::Graph(GraphError::EmptyGraph));
    }
    if n == 1 {
        return Ok(CaseReport {
            value: CutValue::Infinite,
            witness: ArrivalOrder::identity(1),
            mode,
            exact: true,
        });
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut consider = |value: f64, order: &[usize]| {
        let better = match &best {
            None => true,
            Some((b, _)) => {
                if maximize {
                    value > *b
                } else {
                    value < *b
                }
            }
        };
        if better {
            best = Some((value, order.to_vec()));
        }
    };
    match mode {
        SearchMode::Exhaustive => {
            if n > EXHAUSTIVE_CAP {
                return Err(EngineError::ExhaustiveCapacity {
                    n,
                    cap: EXHAUSTIVE_CAP,
                });
            }
            for_each_permutation(n, |order| -> Result<(), EngineError> {
                let v = run_value(g, order, alg)?.finite();
                consider(v, order);
                Ok(())
            })?;
        }
        SearchMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(EngineError::ZeroSamples);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut order: Vec<usize> = (0..n).collect();
            for _ in 0..samples {
                shuffle(&mut order, &mut rng);
                let v = run_value(g, &order, alg)?.finite();
                consider(v, &order);
            }
        }
    }
    let (value, witness) = best.expect("at least one order was evaluated");
    Ok(CaseReport {
        value: CutValue::Finite(value),
        witness: ArrivalOrder::new(witness).expect("orders are permutations"),
        mode,
        exact: matches!(mode, SearchMode::Exhaustive),
    })
}

/// Expectation mode for [`expected_value_random_order`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExpectationMode {
    /// Average over all `n!` orders; standard error 0.
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expectation {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub exact: bool,
}

/// Expected cut value under a uniformly random arrival order.
pub fn expected_value_random_order(
    g: &Graph,
    alg: &dyn OnlineCutAlgorithm,
    mode: ExpectationMode,
) -> Result<Expectation, EngineError> {
    if alg.uses_advice() {
        return Err(EngineError::AdviceAlgorithm);
    }
    let n = g.n();
    if n < 2 {
        return Err(EngineError::Graph(GraphError::EmptyGraph));
    }
    match mode {
        ExpectationMode::Exact => {
            if n > EXHAUSTIVE_CAP {
                return Err(EngineError::ExhaustiveCapacity {
                    n,
                    cap: EXHAUSTIVE_CAP,
                });
            }
            let mut sum = 0.0;
            let mut count = 0usize;
            for_each_permutation(n, |order| -> Result<(), EngineError> {
                sum += run_value(g, order, alg)?.finite();
                count += 1;
                Ok(())
            })?;
            Ok(Expectation {
                mean: sum / count as f64,
                std_error: 0.0,
                samples: count,
                exact: true,
            })
        }
        ExpectationMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(EngineError::ZeroSamples);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut order: Vec<usize> = (0..n).collect();
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in 0..samples {
                shuffle(&mut order, &mut rng);
                let v = run_value(g, &order, alg)?.finite();
                sum += v;
                sumsq += v * v;
            }
            let k = samples as f64;
            let mean = sum / k;
            let var = if samples > 1 {
                ((sumsq - sum * sum / k) / (k - 1.0)).max(0.0)
            } else {
                0.0
            };
            Ok(Expectation {
                mean,
                std_error: (var / k).sqrt(),
                samples,
                exact: false,
            })
        }
    }
}

/// Fisher–Yates shuffle driven by the crate's ChaCha8 streams.
pub fn shuffle<R: Rng>(order: &mut [usize], rng: &mut R) {
    for i in (1..order.len()).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
}

/// One seeded uniformly random arrival order.
pub fn seeded_order(n: usize, seed: u64) -> ArrivalOrder {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<usize> = (0..n).collect();
    shuffle(&mut ids, &mut rng);
    ArrivalOrder::new(ids).expect("shuffle preserves the permutation")
}

/// Heap's algorithm; visits each permutation of `0..n` exactly once.
pub fn for_each_permutation<E>(
    n: usize,
    mut visit: impl FnMut(&[usize]) -> Result<(), E>,
) -> Result<(), E> {
    let mut arr: Vec<usize> = (0..n).collect();
    visit(&arr)?;
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                arr.swap(0, i);
            } else {
                arr.swap(c[i], i);
            }
            visit(&arr)?;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{greedy_max, greedy_min, sparse_alg, trivial_first_vertex};
    use crate::oracles::{brute_force_maxcut, brute_force_mincut};

    #[test]
    fn trivial_on_star_depends_on_first_vertex() {
        let g = Graph::star(4);
        let alg = trivial_first_vertex();
        let center_first = ArrivalOrder::new(vec![0, 1, 2, 3, 4]).unwrap();
        let rec = run(&g, &center_first, alg.as_ref(), None).unwrap();
        assert_eq!(rec.value, CutValue::Finite(4.0));
        let leaf_first = ArrivalOrder::new(vec![1, 0, 2, 3, 4]).unwrap();
        let rec = run(&g, &leaf_first, alg.as_ref(), None).unwrap();
        assert_eq!(rec.value, CutValue::Finite(1.0));
    }

    #[test]
    fn greedy_min_on_triangle_matches_opt() {
        let g = Graph::complete(3);
        let rec = run(&g, &ArrivalOrder::identity(3), greedy_min().as_ref(), None).unwrap();
        assert_eq!(rec.value, CutValue::Finite(2.0));
        let (opt, _) = brute_force_mincut(&g).unwrap();
        assert_eq!(rec.value, opt);
    }

    #[test]
    fn worst_case_examples() {
        let star = Graph::star(4);
        let report = worst_case_value(&star, trivial_first_vertex().as_ref(), SearchMode::Exhaustive)
            .unwrap();
        assert_eq!(report.value, CutValue::Finite(4.0));
        // the witness order starts at the center
        assert_eq!(report.witness.vertex_at(0), 0);

        let k3 = Graph::complete(3);
        let report = worst_case_value(&k3, greedy_min().as_ref(), SearchMode::Exhaustive).unwrap();
        assert_eq!(report.value, CutValue::Finite(2.0));

        let k2 = Graph::complete(2);
        for alg in [trivial_first_vertex(), sparse_alg(), greedy_min(), greedy_max()] {
            let report = worst_case_value(&k2, alg.as_ref(), SearchMode::Exhaustive).unwrap();
            assert_eq!(report.value, CutValue::Finite(1.0));
        }
    }

    #[test]
    fn best_case_examples() {
        let star = Graph::star(4);
        let report =
            best_case_value(&star, trivial_first_vertex().as_ref(), SearchMode::Exhaustive).unwrap();
        assert_eq!(report.value, CutValue::Finite(1.0));

        let p4 = Graph::path(4);
        let report = best_case_value(&p4, greedy_min().as_ref(), SearchMode::Exhaustive).unwrap();
        assert_eq!(report.value, CutValue::Finite(1.0));
        assert_eq!(report.value, brute_force_mincut(&p4).unwrap().0);

        // for the max objective the best case over orders is the max functional
        let k4 = Graph::complete(4);
        let report = worst_case_value(&k4, greedy_max().as_ref(), SearchMode::Exhaustive).unwrap();
        assert_eq!(report.value, brute_force_maxcut(&k4).unwrap().0);
    }

    #[test]
    fn sparse_expectation_is_mean_degree() {
        let p3 = Graph::path(3);
        let e = expected_value_random_order(&p3, sparse_alg().as_ref(), ExpectationMode::Exact)
            .unwrap();
        assert!((e.mean - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(e.std_error, 0.0);

        for g in [Graph::cycle(5), Graph::complete(4), Graph::star(3)] {
            let e = expected_value_random_order(&g, sparse_alg().as_ref(), ExpectationMode::Exact)
                .unwrap();
            let closed_form = 2.0 * g.total_weight() / g.n() as f64;
            assert!((e.mean - closed_form).abs() < 1e-9);
        }
    }

    #[test]
    fn trivial_expectation_on_k4() {
        let e = expected_value_random_order(
            &Graph::complete(4),
            trivial_first_vertex().as_ref(),
            ExpectationMode::Exact,
        )
        .unwrap();
        assert_eq!(e.mean, 3.0);
    }

    #[test]
    fn ordering_of_functionals() {
        for (g, seed) in [(Graph::cycle(6), 1u64), (Graph::complete(5), 2), (Graph::star(4), 3)] {
            for alg in [trivial_first_vertex(), sparse_alg(), greedy_min(), greedy_max()] {
                let worst =
                    worst_case_value(&g, alg.as_ref(), SearchMode::Exhaustive).unwrap();
                let best = best_case_value(&g, alg.as_ref(), SearchMode::Exhaustive).unwrap();
                let exp =
                    expected_value_random_order(&g, alg.as_ref(), ExpectationMode::Exact).unwrap();
                assert!(best.value.finite() <= exp.mean + 1e-12);
                assert!(exp.mean <= worst.value.finite() + 1e-12);
                // Monte Carlo agrees within 3 standard errors
                let mc = expected_value_random_order(
                    &g,
                    alg.as_ref(),
                    ExpectationMode::MonteCarlo {
                        samples: 4000,
                        seed,
                    },
                )
                .unwrap();
                assert!(
                    (mc.mean - exp.mean).abs() <= 3.0 * mc.std_error.max(1e-3),
                    "{}: mc {} vs exact {} (se {})",
                    alg.name(),
                    mc.mean,
                    exp.mean,
                    mc.std_error
                );
            }
        }
    }

    #[test]
    fn runs_are_deterministic_and_valid() {
        let g = Graph::cycle(6);
        let order = ArrivalOrder::new(vec![3, 0, 5, 1, 4, 2]).unwrap();
        for alg in [trivial_first_vertex(), sparse_alg(), greedy_min(), greedy_max()] {
            let a = run(&g, &order, alg.as_ref(), None).unwrap();
            let b = run(&g, &order, alg.as_ref(), None).unwrap();
            assert_eq!(a, b);
            assert!(a.assignment.is_valid_cut());
            assert_eq!(cut_weight(&g, &a.assignment).unwrap(), a.value);
        }
    }

    #[test]
    fn tape_contract_is_enforced() {
        let g = Graph::complete(3);
        let order = ArrivalOrder::identity(3);
        let tape = AdviceTape::from_bits(vec![true, false]);
        let err = run(&g, &order, trivial_first_vertex().as_ref(), Some(&tape)).unwrap_err();
        assert_eq!(err, EngineError::UnexpectedTape);
        let err = run(&g, &order, crate::advice::advice_optimal().as_ref(), None).unwrap_err();
        assert_eq!(err, EngineError::MissingTape);
    }

    #[test]
    fn functionals_reject_advice_algorithms() {
        let g = Graph::complete(3);
        let alg = crate::advice::advice_optimal();
        assert_eq!(
            worst_case_value(&g, alg.as_ref(), SearchMode::Exhaustive).unwrap_err(),
            EngineError::AdviceAlgorithm
        );
    }

    #[test]
    fn permutation_generator_is_complete() {
        let mut seen = std::collections::BTreeSet::new();
        for_each_permutation::<()>(4, |p| {
            seen.insert(p.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn sampled_modes_bound_the_exhaustive_extremes() {
        let g = Graph::cycle(6);
        let sampled = SearchMode::Sampled { samples: 30, seed: 4 };
        for alg in [trivial_first_vertex(), greedy_min()] {
            let exact_worst =
                worst_case_value(&g, alg.as_ref(), SearchMode::Exhaustive).unwrap();
            let lower = worst_case_value(&g, alg.as_ref(), sampled).unwrap();
            assert!(!lower.exact);
            assert!(lower.value.finite() <= exact_worst.value.finite());
            let exact_best = best_case_value(&g, alg.as_ref(), SearchMode::Exhaustive).unwrap();
            let upper = best_case_value(&g, alg.as_ref(), sampled).unwrap();
            assert!(upper.value.finite() >= exact_best.value.finite());
        }
    }

    #[test]
    fn exhaustive_capacity_is_enforced() {
        let g = Graph::empty(10);
        let err =
            worst_case_value(&g, trivial_first_vertex().as_ref(), SearchMode::Exhaustive)
                .unwrap_err();
        assert!(matches!(err, EngineError::ExhaustiveCapacity { .. }));
    }
}
