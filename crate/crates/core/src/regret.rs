//! Non-stationary regret on a time-varying weight function with a variational
//! budget: the follow-the-current-optimal player, the exact telescoping
//! identity behind its regret bound, and the randomized path adversary with
//! its uniform-edge player.
//!
//! Feedback is full information: the step-`t` weight function is revealed in
//! full after the cut for step `t` is played. The dummy start is `w_0 = 1` on
//! every edge.

use crate::graph::{CutAssignment, Graph, GraphError, Side};
use crate::oracles::{stoer_wagner_mincut, OracleError};
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RegretError {
    #[error("step {t} has {got} weights but the edge list has {want}")]
    RowSize { t: usize, got: usize, want: usize },
    #[error("negative or non-finite weight {w} at step {t}, edge {e}")]
    BadWeight { t: usize, e: usize, w: f64 },
    #[error("variation {variation} exceeds the declared budget {budget}")]
    BudgetExceeded { variation: f64, budget: f64 },
    #[error("sequence edge list does not match the graph")]
    EdgesMismatch,
    #[error("epsilon {0} outside [0, 1]")]
    BadEpsilon(f64),
    #[error("graph is not a path")]
    NotAPath,
    #[error("not a follow-the-current-optimal trace: {0}")]
    NotFtcoTrace(String),
    #[error("bad sequence file: {0}")]
    Parse(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A `T`-step edge-weight sequence with a declared variational budget.
///
/// The budget constrains the summed L1 distance between successive steps
/// (`sum_t ||w_t - w_{t+1}||_1 <= V_T`); sequences that deliberately exceed
/// any sublinear budget carry the `unbudgeted` flag instead.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    edges: Vec<(usize, usize)>,
    weights: Vec<Vec<f64>>,
    declared_budget: f64,
    unbudgeted: bool,
}

#[derive(Serialize, Deserialize)]
struct SequenceRepr {
    edges: Vec<(usize, usize)>,
    budget: f64,
    #[serde(default)]
    unbudgeted: bool,
    weights: Vec<Vec<f64>>,
}

impl Serialize for WeightSequence {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        SequenceRepr {
            edges: self.edges.clone(),
            budget: self.declared_budget,
            unbudgeted: self.unbudgeted,
            weights: self.weights.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for WeightSequence {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = SequenceRepr::deserialize(de)?;
        WeightSequence::from_parts(repr.edges, repr.weights, repr.budget, repr.unbudgeted)
            .map_err(serde::de::Error::custom)
    }
}

impl WeightSequence {
    /// Validates row sizes, nonnegativity, and the budget constraint.
    pub fn from_parts(
        edges: Vec<(usize, usize)>,
        weights: Vec<Vec<f64>>,
        declared_budget: f64,
        unbudgeted: bool,
    ) -> Result<WeightSequence, RegretError> {
        for (t, row) in weights.iter().enumerate() {
            if row.len() != edges.len() {
                return Err(RegretError::RowSize {
                    t: t + 1,
                    got: row.len(),
                    want: edges.len(),
                });
            }
            for (e, &w) in row.iter().enumerate() {
                if !(w.is_finite() && w >= 0.0) {
                    return Err(RegretError::BadWeight { t: t + 1, e, w });
                }
            }
        }
        if !(declared_budget.is_finite() && declared_budget >= 0.0) {
            return Err(RegretError::Parse(format!(
                "declared budget {declared_budget} is not a nonnegative real"
            )));
        }
        let seq = WeightSequence {
            edges,
            weights,
            declared_budget,
            unbudgeted,
        };
        if !seq.unbudgeted {
            let variation = seq.variation();
            if variation > seq.declared_budget + 1e-9 {
                return Err(RegretError::BudgetExceeded {
                    variation,
                    budget: seq.declared_budget,
                });
            }
        }
        Ok(seq)
    }

    /// A sequence over `g`'s stored edge order.
    pub fn new(g: &Graph, weights: Vec<Vec<f64>>, budget: f64) -> Result<WeightSequence, RegretError> {
        WeightSequence::from_parts(edge_pairs(g), weights, budget, false)
    }

    pub fn new_unbudgeted(g: &Graph, weights: Vec<Vec<f64>>) -> Result<WeightSequence, RegretError> {
        let mut seq = WeightSequence::from_parts(edge_pairs(g), weights, 0.0, true)?;
        seq.declared_budget = seq.variation();
        Ok(seq)
    }

    pub fn from_json_str(text: &str) -> Result<WeightSequence, RegretError> {
        serde_json::from_str(text).map_err(|e| RegretError::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("sequence serializes")
    }

    /// The sequence's edge order must match the graph's stored edges exactly.
    pub fn check_matches(&self, g: &Graph) -> Result<(), RegretError> {
        if self.edges != edge_pairs(g) {
            return Err(RegretError::EdgesMismatch);
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Weights at 1-based step `t`.
    pub fn weights_at(&self, t: usize) -> &[f64] {
        &self.weights[t - 1]
    }

    pub fn declared_budget(&self) -> f64 {
        self.declared_budget
    }

    pub fn is_unbudgeted(&self) -> bool {
        self.unbudgeted
    }

    /// Summed L1 distance between successive steps.
    pub fn variation(&self) -> f64 {
        self.weights
            .windows(2)
            .map(|pair| l1(&pair[0], &pair[1]))
            .sum()
    }

    /// Variation including the jump from the dummy all-ones start `w_0`.
    pub fn variation_from_uniform_start(&self) -> f64 {
        match self.weights.first() {
            None => 0.0,
            Some(first) => {
                let ones = vec![1.0; first.len()];
                l1(&ones, first) + self.variation()
            }
        }
    }
}

fn edge_pairs(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|e| (e.u, e.v)).collect()
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// One step of a regret trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: usize,
    pub played: CutAssignment,
    pub played_value: f64,
    pub opt_value: f64,
    pub inst_regret: f64,
    pub cum_regret: f64,
    pub variation_so_far: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretTrace {
    pub rows: Vec<TraceRow>,
}

impl RegretTrace {
    /// Cumulative regret: played total minus per-step-optimal total.
    pub fn regret(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.cum_regret)
    }

    /// Trace CSV with the documented column set.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,played_value,opt_value,inst_regret,cum_regret,variation_so_far\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.t, r.played_value, r.opt_value, r.inst_regret, r.cum_regret, r.variation_so_far
            ));
        }
        out
    }
}

fn cut_value_under(g: &Graph, weights: &[f64], a: &CutAssignment) -> f64 {
    g.edges()
        .iter()
        .zip(weights)
        .filter(|(e, _)| a.side(e.u) != a.side(e.v))
        .map(|(_, &w)| w)
        .sum()
}

/// Follow the current optimal: at step `t` play a minimum cut of the previous
/// weight function (`w_0 = 1` everywhere), then observe `w_t`.
///
/// Fully deterministic; the per-step optimum comes from the Stoer–Wagner
/// oracle with its fixed tie rule.
pub fn ftco(g: &Graph, seq: &WeightSequence) -> Result<RegretTrace, RegretError> {
    seq.check_matches(g)?;
    if g.n() < 2 {
        return Err(RegretError::Oracle(OracleError::NeedTwoVertices));
    }
    let mut prev_weights = vec![1.0; g.m()];
    let mut rows = Vec::with_capacity(seq.steps());
    let mut cum = 0.0;
    let mut variation_so_far = 0.0;
    for t in 1..=seq.steps() {
        let (_, played) = stoer_wagner_mincut(&g.with_edge_weights(&prev_weights)?)?;
        let now = seq.weights_at(t);
        let played_value = cut_value_under(g, now, &played);
        let (opt, _) = stoer_wagner_mincut(&g.with_edge_weights(now)?)?;
        let opt_value = opt.finite();
        let inst = played_value - opt_value;
        cum += inst;
        variation_so_far += l1(&prev_weights, now);
        rows.push(TraceRow {
            t,
            played,
            played_value,
            opt_value,
            inst_regret: inst,
            cum_regret: cum,
            variation_so_far,
        });
        prev_weights = now.to_vec();
    }
    Ok(RegretTrace { rows })
}

/// Non-stationary regret of a completed trace.
pub fn regret(trace: &RegretTrace) -> f64 {
    trace.regret()
}

/// Both sides of the exact regret identity for a follow-the-current-optimal
/// trace, plus the variation bound on the weight-shift term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    /// Regret as summed from the trace.
    pub lhs: f64,
    /// `C_0(X_0*) - C_T(X_T*) + sum_t dC_t`.
    pub rhs: f64,
    pub equal: bool,
    pub delta_sum: f64,
    /// Variation including the `w_0` jump; `delta_sum` can never exceed it.
    pub variation_bound: f64,
    pub delta_within_variation: bool,
}

/// Verifies `regret = C_0(X_0*) - C_T(X_T*) + sum_t dC_t` exactly, where
/// `dC_t` is the weight shift on the cut played at step `t`.
pub fn telescoping_identity_check(
    g: &Graph,
    seq: &WeightSequence,
    trace: &RegretTrace,
) -> Result<IdentityReport, RegretError> {
    seq.check_matches(g)?;
    if trace.rows.len() != seq.steps() {
        return Err(RegretError::NotFtcoTrace(format!(
            "trace has {} rows for a {}-step sequence",
            trace.rows.len(),
            seq.steps()
        )));
    }
    let ones = vec![1.0; g.m()];
    let (c0_opt, _) = stoer_wagner_mincut(g)?;
    let c0_opt = c0_opt.finite();
    let mut delta_sum = 0.0;
    for (i, row) in trace.rows.iter().enumerate() {
        let prev: &[f64] = if i == 0 {
            &ones
        } else {
            seq.weights_at(i)
        };
        // the played cut must be optimal under the previous weights
        let played_prev = cut_value_under(g, prev, &row.played);
        let opt_prev = if i == 0 {
            c0_opt
        } else {
            trace.rows[i - 1].opt_value
        };
        if !crate::graph::weight_eq(played_prev, opt_prev) {
            return Err(RegretError::NotFtcoTrace(format!(
                "step {}: played cut is worth {played_prev} under the previous weights, optimum was {opt_prev}",
                row.t
            )));
        }
        let now = seq.weights_at(i + 1);
        delta_sum += cut_value_under(g, now, &row.played) - played_prev;
    }
    let c_t_opt = trace.rows.last().map_or(c0_opt, |r| r.opt_value);
    let lhs = trace.regret();
    let rhs = c0_opt - c_t_opt + delta_sum;
    let variation_bound = seq.variation_from_uniform_start();
    Ok(IdentityReport {
        lhs,
        rhs,
        equal: (lhs - rhs).abs() <= 1e-9,
        delta_sum,
        variation_bound,
        delta_within_variation: delta_sum <= variation_bound + 1e-9,
    })
}

/// The lower-bound adversary on a path: at step `t` one uniformly random edge
/// weighs `1 - eps_t`, every other edge weighs 1. The declared budget is the
/// proof's `2 * sum(eps_t)`.
pub fn path_adversary(
    n: usize,
    steps: usize,
    epsilons: &[f64],
    seed: u64,
) -> Result<WeightSequence, RegretError> {
    if n < 2 {
        return Err(RegretError::NotAPath);
    }
    if epsilons.len() != steps {
        return Err(RegretError::Parse(format!(
            "expected {steps} epsilons, got {}",
            epsilons.len()
        )));
    }
    if let Some(&bad) = epsilons.iter().find(|&&e| !(0.0..=1.0).contains(&e)) {
        return Err(RegretError::BadEpsilon(bad));
    }
    let g = Graph::path(n);
    let m = g.m();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = Vec::with_capacity(steps);
    for &eps in epsilons {
        let mut row = vec![1.0; m];
        row[rng.gen_range(0..m)] = 1.0 - eps;
        weights.push(row);
    }
    let budget = 2.0 * epsilons.iter().sum::<f64>();
    WeightSequence::new(&g, weights, budget)
}

/// The path's vertex sequence from one degree-1 endpoint to the other
/// (smallest-id endpoint first), or `None` if `g` is not a path.
fn path_order(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 2 || g.m() != n - 1 {
        return None;
    }
    let ends: Vec<usize> = (0..n).filter(|&v| g.neighbors(v).len() == 1).collect();
    if ends.len() != 2 || (0..n).any(|v| g.neighbors(v).len() > 2) {
        return None;
    }
    let mut seq = vec![ends[0]];
    let mut prev = usize::MAX;
    while seq.len() < n {
        let here = *seq.last().unwrap();
        let next = g
            .neighbors(here)
            .iter()
            .map(|&(u, _)| u)
            .find(|&u| u != prev)?;
        prev = here;
        seq.push(next);
    }
    (seq.len() == n).then_some(seq)
}

/// Expected per-step regret of the uniform-edge player against the path
/// adversary: `eps * (1 - 1/(n-1))` on a path with `n - 1` edges.
pub fn uniform_player_step_regret(n: usize, eps: f64) -> f64 {
    eps * (1.0 - 1.0 / (n - 1) as f64)
}

/// The randomized baseline on a path: each step independently plays one
/// uniformly random edge as the cut.
pub fn uniform_edge_player(
    g: &Graph,
    seq: &WeightSequence,
    seed: u64,
) -> Result<RegretTrace, RegretError> {
    seq.check_matches(g)?;
    let order = path_order(g).ok_or(RegretError::NotAPath)?;
    let mut rank = vec![0usize; g.n()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    // stored edge j splits the path after position min(rank[u], rank[v])
    let cut_positions: Vec<usize> = g
        .edges()
        .iter()
        .map(|e| rank[e.u].min(rank[e.v]))
        .collect();
    let assignments: Vec<CutAssignment> = (0..g.m())
        .map(|j| {
            let mut a = CutAssignment::unassigned(g.n());
            for (i, &v) in order.iter().enumerate() {
                a.assign(v, if i <= cut_positions[j] { Side::X } else { Side::Y });
            }
            a
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(seq.steps());
    let mut cum = 0.0;
    let mut variation_so_far = 0.0;
    let mut prev: Vec<f64> = vec![1.0; g.m()];
    for t in 1..=seq.steps() {
        let now = seq.weights_at(t);
        let j = rng.gen_range(0..g.m());
        let played_value = now[j];
        let opt_value = now.iter().copied().fold(f64::INFINITY, f64::min);
        let inst = played_value - opt_value;
        cum += inst;
        variation_so_far += l1(&prev, now);
        rows.push(TraceRow {
            t,
            played: assignments[j].clone(),
            played_value,
            opt_value,
            inst_regret: inst,
            cum_regret: cum,
            variation_so_far,
        });
        prev = now.to_vec();
    }
    Ok(RegretTrace { rows })
}

/// The motivating unbudgeted adversary on the two-edge path: each step is one
/// of the complementary weight vectors `(1, 0)` or `(0, 1)`, equiprobably.
/// Any player's expected per-step cut is at least 0.5 while the optimum is 0,
/// so regret grows linearly; the sequence carries the `unbudgeted` flag.
pub fn coinflip_p3_adversary(steps: usize, seed: u64) -> WeightSequence {
    let g = Graph::path(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = (0..steps)
        .map(|_| {
            if rng.gen::<f64>() < 0.5 {
                vec![1.0, 0.0]
            } else {
                vec![0.0, 1.0]
            }
        })
        .collect();
    WeightSequence::new_unbudgeted(&g, weights).expect("coinflip rows are well-formed")
}

/// Seeded random sequence that provably respects its declared budget, for
/// bound checks: `w_1` is all ones and each later step shifts one edge by a
/// bounded amount, spending from the budget.
pub fn budgeted_random_sequence(
    g: &Graph,
    steps: usize,
    budget: f64,
    seed: u64,
) -> Result<WeightSequence, RegretError> {
    let m = g.m();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: Vec<Vec<f64>> = Vec::with_capacity(steps);
    if steps > 0 {
        weights.push(vec![1.0; m]);
    }
    let mut remaining = budget;
    for _ in 1..steps {
        let mut row = weights.last().unwrap().clone();
        if m > 0 {
            let alloc = remaining * rng.gen::<f64>() * 0.5;
            let j = rng.gen_range(0..m);
            let mut delta = alloc * (rng.gen::<f64>() * 2.0 - 1.0);
            if row[j] + delta < 0.0 {
                delta = -row[j];
            }
            row[j] += delta;
            remaining -= delta.abs();
        }
        weights.push(row);
    }
    WeightSequence::new(g, weights, budget)
}
