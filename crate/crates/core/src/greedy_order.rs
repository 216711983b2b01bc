//! Constructive permutation builders: for every graph there is an arrival
//! order on which the greedy minimizer attains a minimum cut, and one on which
//! the greedy maximizer attains a maximum cut; likewise the greedy submodular
//! maximizer attains the maximum when a maximal maximizer arrives first.
//!
//! The builders are primary; exhaustive search over all orders is retained as
//! an independent verification path, never as a fallback.

use crate::engine::EngineError;
use crate::graph::{
    weight_cmp, ArrivalOrder, CutAssignment, CutValue, Graph, GraphError, Side,
};
use crate::oracles::{
    all_optimal_bipartitions, brute_force_maxcut, brute_force_set_optimum, is_submodular,
    OracleError, Sense, SetFunction, SUBMOD_CHECK_CAP,
};
use std::cmp::Ordering;
use thiserror::Error;

/// Exhaustive order-search cap: 8! = 40,320 runs per graph.
pub const ORDER_SEARCH_CAP: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum OrderError {
    #[error("exhaustive order search capped at n <= {cap}, graph has {n} vertices")]
    Capacity { n: usize, cap: usize },
    #[error("function is not submodular")]
    NotSubmodular,
    #[error("order violates condition ({condition}) at arrival {index}")]
    ConditionViolated { condition: &'static str, index: usize },
    #[error("construction contract violated: {0}")]
    ContractViolation(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("engine: {0}")]
    Engine(Box<EngineError>),
}

impl From<EngineError> for OrderError {
    fn from(e: EngineError) -> Self {
        OrderError::Engine(Box::new(e))
    }
}

fn crossing_to_set(g: &Graph, v: usize, in_set: &[bool]) -> f64 {
    g.neighbors(v)
        .iter()
        .filter(|&&(u, _)| in_set[u])
        .map(|&(_, w)| w)
        .sum()
}

/// Orders `pool` so that every picked vertex has at least as much weight into
/// the already-ordered own side (seeded with `start_own`) as into the
/// contracted `anchor` set. When `start_own` is empty the first pick is
/// unconstrained. A valid pick always exists when `(anchor, pool)` comes from
/// a minimum cut: otherwise the ordered part of the pool would form a cheaper
/// cut on its own.
fn anchored_greedy_sequence(
    g: &Graph,
    pool: &[usize],
    anchor: &[usize],
    start_own: &[usize],
) -> Result<Vec<usize>, OrderError> {
    let mut own = vec![false; g.n()];
    for &v in start_own {
        own[v] = true;
    }
    let mut anchor_set = vec![false; g.n()];
    for &v in anchor {
        anchor_set[v] = true;
    }
    let mut remaining: Vec<usize> = pool.to_vec();
    remaining.sort_unstable();
    let mut out = Vec::with_capacity(pool.len());
    if start_own.is_empty() && !remaining.is_empty() {
        let first = remaining.remove(0);
        own[first] = true;
        out.push(first);
    }
    while !remaining.is_empty() {
        let pos = remaining
            .iter()
            .position(|&v| {
                weight_cmp(crossing_to_set(g, v, &own), crossing_to_set(g, v, &anchor_set))
                    != Ordering::Less
            })
            .ok_or_else(|| {
                OrderError::ContractViolation(
                    "no next vertex prefers the ordered side, yet the cut is minimum".into(),
                )
            })?;
        let v = remaining.remove(pos);
        own[v] = true;
        out.push(v);
    }
    Ok(out)
}

/// Builds an arrival order on which the greedy minimizer produces a minimum
/// cut, together with that cut.
///
/// Chooses a minimum cut with the smallest possible X side
/// (lexicographically least among those). If `|X| = 1`, grow Y greedily
/// against the contracted X. Otherwise pick a pair `x, x'` in X with
/// `w(x', x) > w(x', Y)` — the minimality of `|X|` guarantees one exists —
/// order Y against the contracted X, place `x'` at position `|Y| + 2`, and
/// order the rest of X against the contracted Y.
pub fn construct_mincut_order(g: &Graph) -> Result<(ArrivalOrder, CutAssignment), OrderError> {
    let n = g.n();
    if n < 2 {
        return Err(OrderError::Oracle(OracleError::NeedTwoVertices));
    }
    let masks = all_optimal_bipartitions(g, Sense::Min)?;
    let full = (1u64 << n) - 1;
    let mut small: Option<u64> = None;
    for mask in masks {
        for side in [mask, full & !mask] {
            let better = match small {
                None => true,
                Some(cur) => {
                    let (a, b) = (side.count_ones(), cur.count_ones());
                    a < b || (a == b && side < cur)
                }
            };
            if better {
                small = Some(side);
            }
        }
    }
    let x_mask = small.expect("a graph with n >= 2 has an optimal bipartition");
    let x_set: Vec<usize> = (0..n).filter(|&v| x_mask >> v & 1 == 1).collect();
    let y_set: Vec<usize> = (0..n).filter(|&v| x_mask >> v & 1 == 0).collect();
    let cut = CutAssignment::from_x_set(n, x_set.iter().copied());

    let order = if x_set.len() == 1 {
        let mut order = vec![x_set[0]];
        order.extend(anchored_greedy_sequence(g, &y_set, &x_set, &[])?);
        order
    } else {
        // x' must prefer x over all of Y
        let mut y_sidemask = vec![false; n];
        for &v in &y_set {
            y_sidemask[v] = true;
        }
        let mut pair = None;
        'outer: for &x in &x_set {
            for &xp in &x_set {
                if xp != x
                    && weight_cmp(g.weight_between(xp, x), crossing_to_set(g, xp, &y_sidemask))
                        == Ordering::Greater
                {
                    pair = Some((x, xp));
                    break 'outer;
                }
            }
        }
        let (x, xp) = pair.ok_or_else(|| {
            OrderError::ContractViolation(
                "no in-side pair beats the crossing weight in a smallest minimum-cut side of size > 1"
                    .into(),
            )
        })?;
        let x_rest: Vec<usize> = x_set.iter().copied().filter(|&v| v != x && v != xp).collect();
        let mut order = vec![x];
        order.extend(anchored_greedy_sequence(g, &y_set, &x_set, &[])?);
        order.push(xp);
        order.extend(anchored_greedy_sequence(g, &x_rest, &y_set, &[x, xp])?);
        order
    };
    Ok((ArrivalOrder::new(order)?, cut))
}

/// Replays the minimum-cut order conditions (i)-(iii) against a cut.
pub fn check_mincut_order_conditions(
    g: &Graph,
    cut: &CutAssignment,
    order: &ArrivalOrder,
) -> Result<(), OrderError> {
    let n = g.n();
    if cut.side(order.vertex_at(0)) != Some(Side::X) {
        return Err(OrderError::ConditionViolated { condition: "i", index: 1 });
    }
    if n >= 2 && cut.side(order.vertex_at(1)) != Some(Side::Y) {
        return Err(OrderError::ConditionViolated { condition: "i", index: 2 });
    }
    let y_total = cut.count(Side::Y);
    let mut in_x = vec![false; n];
    let mut in_y = vec![false; n];
    let mut first_late_x: Option<usize> = None;
    for i in 0..n {
        let v = order.vertex_at(i);
        if i >= 2 {
            let to_x = crossing_to_set(g, v, &in_x);
            let to_y = crossing_to_set(g, v, &in_y);
            let (own, other) = match cut.side(v).unwrap() {
                Side::X => (to_x, to_y),
                Side::Y => (to_y, to_x),
            };
            if weight_cmp(own, other) == Ordering::Less {
                return Err(OrderError::ConditionViolated { condition: "ii", index: i + 1 });
            }
            if cut.side(v) == Some(Side::X) && first_late_x.is_none() {
                first_late_x = Some(i + 1);
                if i + 1 != y_total + 2 || weight_cmp(to_x, to_y) != Ordering::Greater {
                    return Err(OrderError::ConditionViolated { condition: "iii", index: i + 1 });
                }
            }
        }
        match cut.side(v).unwrap() {
            Side::X => in_x[v] = true,
            Side::Y => in_y[v] = true,
        }
    }
    Ok(())
}

/// Builds an arrival order on which the greedy maximizer produces a maximum
/// cut, together with that cut.
///
/// Starts from a brute-force maximum cut and extends greedily with vertices
/// whose within-side crossing does not exceed the cross-side crossing (ties
/// only continue the previous vertex's side). When no vertex qualifies the
/// unrevealed part of one side is swapped across, which provably preserves
/// the maximum, and the construction continues; progress is asserted.
pub fn construct_maxcut_order(g: &Graph) -> Result<(ArrivalOrder, CutAssignment), OrderError> {
    let n = g.n();
    let (opt, start) = brute_force_maxcut(g)?;
    let opt = opt.finite();
    let mut side: Vec<Side> = (0..n).map(|v| start.side(v).unwrap()).collect();
    let v1 = (0..n)
        .find(|&v| side[v] == Side::X)
        .expect("a valid cut has an X side");
    let v2 = (0..n)
        .find(|&v| side[v] == Side::Y)
        .expect("a valid cut has a Y side");
    let mut order = vec![v1, v2];
    let mut placed = vec![false; n];
    placed[v1] = true;
    placed[v2] = true;
    let mut in_x = vec![false; n];
    let mut in_y = vec![false; n];
    in_x[v1] = true;
    in_y[v2] = true;

    let find_candidate = |side: &[Side], placed: &[bool], in_x: &[bool], in_y: &[bool], prev: Side| {
        (0..n).find(|&v| {
            if placed[v] {
                return false;
            }
            let to_x = crossing_to_set(g, v, in_x);
            let to_y = crossing_to_set(g, v, in_y);
            let (own, other) = match side[v] {
                Side::X => (to_x, to_y),
                Side::Y => (to_y, to_x),
            };
            match weight_cmp(own, other) {
                Ordering::Less => true,
                Ordering::Equal => side[v] == prev,
                Ordering::Greater => false,
            }
        })
    };

    while order.len() < n {
        let prev = side[*order.last().unwrap()];
        let pick = match find_candidate(&side, &placed, &in_x, &in_y, prev) {
            Some(v) => v,
            None => {
                // stuck: the previous vertex's side must be fully revealed,
                // and moving the other side's remainder across to it
                // preserves the maximum (every such vertex is tied)
                for v in 0..n {
                    if !placed[v] && side[v] == prev {
                        return Err(OrderError::ContractViolation(format!(
                            "stuck with vertex {v} unrevealed on the previous side {prev}"
                        )));
                    }
                }
                for v in 0..n {
                    if !placed[v] {
                        side[v] = prev;
                    }
                }
                let swapped_value: f64 = g
                    .edges()
                    .iter()
                    .filter(|e| side[e.u] != side[e.v])
                    .map(|e| e.w)
                    .sum();
                if weight_cmp(swapped_value, opt) != Ordering::Equal {
                    return Err(OrderError::ContractViolation(format!(
                        "tail swap changed the cut value from {opt} to {swapped_value}"
                    )));
                }
                find_candidate(&side, &placed, &in_x, &in_y, prev).ok_or_else(|| {
                    OrderError::ContractViolation("no candidate even after the tail swap".into())
                })?
            }
        };
        placed[pick] = true;
        match side[pick] {
            Side::X => in_x[pick] = true,
            Side::Y => in_y[pick] = true,
        }
        order.push(pick);
    }

    let mut cut = CutAssignment::unassigned(n);
    for (v, &s) in side.iter().enumerate() {
        cut.assign(v, s);
    }
    Ok((ArrivalOrder::new(order)?, cut))
}

/// Replays the maximum-cut order conditions (i)-(iii) against a cut.
pub fn check_maxcut_order_conditions(
    g: &Graph,
    cut: &CutAssignment,
    order: &ArrivalOrder,
) -> Result<(), OrderError> {
    let n = g.n();
    if cut.side(order.vertex_at(0)) != Some(Side::X) {
        return Err(OrderError::ConditionViolated { condition: "i", index: 1 });
    }
    if n >= 2 && cut.side(order.vertex_at(1)) != Some(Side::Y) {
        return Err(OrderError::ConditionViolated { condition: "i", index: 2 });
    }
    let mut in_x = vec![false; n];
    let mut in_y = vec![false; n];
    for i in 0..n {
        let v = order.vertex_at(i);
        if i >= 2 {
            let to_x = crossing_to_set(g, v, &in_x);
            let to_y = crossing_to_set(g, v, &in_y);
            let (own, other) = match cut.side(v).unwrap() {
                Side::X => (to_x, to_y),
                Side::Y => (to_y, to_x),
            };
            match weight_cmp(own, other) {
                Ordering::Greater => {
                    return Err(OrderError::ConditionViolated { condition: "ii", index: i + 1 })
                }
                Ordering::Equal => {
                    let prev = order.vertex_at(i - 1);
                    if cut.side(prev) != cut.side(v) {
                        return Err(OrderError::ConditionViolated {
                            condition: "iii",
                            index: i + 1,
                        });
                    }
                }
                Ordering::Less => {}
            }
        }
        match cut.side(v).unwrap() {
            Side::X => in_x[v] = true,
            Side::Y => in_y[v] = true,
        }
    }
    Ok(())
}

/// Element order on which the greedy submodular maximizer returns a maximizer:
/// an inclusion-maximal maximizer first (ascending), then the rest.
///
/// Submodularity is verified when the ground set is small enough to check
/// (at most [`SUBMOD_CHECK_CAP`] elements) and assumed otherwise.
pub fn construct_submodular_order(f: &SetFunction) -> Result<Vec<usize>, OrderError> {
    let k = f.ground_size();
    if k <= SUBMOD_CHECK_CAP && !is_submodular(f)? {
        return Err(OrderError::NotSubmodular);
    }
    let opt = brute_force_set_optimum(f, Sense::Max)?;
    let mut order: Vec<usize> = (0..k).filter(|&e| opt.maximal_witness >> e & 1 == 1).collect();
    order.extend((0..k).filter(|&e| opt.maximal_witness >> e & 1 == 0));
    Ok(order)
}

/// Result of the exhaustive order search.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderSearch {
    pub best_value: CutValue,
    pub witness: ArrivalOrder,
    pub matches_target: bool,
}

/// Exhaustively evaluates all `n!` orders and reports the best value for the
/// stated objective (min for cut minimization, max for maximization) along
/// with whether it equals `target`.
pub fn verify_min_over_orders(
    g: &Graph,
    alg: &dyn crate::engine::OnlineCutAlgorithm,
    target: f64,
    objective: Sense,
) -> Result<OrderSearch, OrderError> {
    let n = g.n();
    if n > ORDER_SEARCH_CAP {
        return Err(OrderError::Capacity {
            n,
            cap: ORDER_SEARCH_CAP,
        });
    }
    let report = match objective {
        Sense::Min => crate::engine::best_case_value(g, alg, crate::engine::SearchMode::Exhaustive)?,
        Sense::Max => crate::engine::worst_case_value(g, alg, crate::engine::SearchMode::Exhaustive)?,
    };
    let matches_target = match report.value {
        CutValue::Finite(v) => crate::graph::weight_eq(v, target),
        CutValue::Infinite => false,
    };
    Ok(OrderSearch {
        best_value: report.value,
        witness: report.witness,
        matches_target,
    })
}
