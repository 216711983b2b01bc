//! The advice-tape model: sealed bit tapes with consumed-bit accounting, the
//! offline extendability oracle, the optimal `n-1`-bit algorithm, the
//! min-degree position scheme, and fooling-pair search against bit budgets.
//!
//! Tapes are fixed-length with the length known to the algorithm; the
//! self-delimiting overhead a prefix-free encoding would add is documented
//! here but not implemented. Bit convention: 1 means "place on X"; bits are
//! consumed most-significant-first within each serialized byte.

use crate::engine::{CutStrategy, EngineError, OnlineCutAlgorithm, StepContext};
use crate::graph::{
    cut_weight, weight_cmp, weight_eq, ArrivalOrder, CutAssignment, CutValue, Graph, GraphError,
    Side,
};
use crate::oracles::{brute_force_mincut, consistent_restriction, OracleError};
use std::cmp::Ordering;
use thiserror::Error;

/// Cap on completion enumeration in the extendability oracle.
pub const COMPLETION_CAP: usize = 24;

#[derive(Debug, Error, PartialEq)]
pub enum AdviceError {
    #[error("advice tape exhausted")]
    TapeExhausted,
    #[error("bad tape serialization: {0}")]
    BadHex(String),
    #[error("candidate vertex {0} is already assigned")]
    CandidateAssigned(usize),
    #[error("{unassigned} unassigned vertices exceed the completion cap {cap}")]
    Capacity { unassigned: usize, cap: usize },
    #[error("algorithm does not consume advice")]
    NotAdviceAlgorithm,
    #[error("internal contract violated: {0}")]
    ContractViolation(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("engine: {0}")]
    Engine(Box<EngineError>),
}

impl From<EngineError> for AdviceError {
    fn from(e: EngineError) -> Self {
        AdviceError::Engine(Box::new(e))
    }
}

/// A finite, read-only bit string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdviceTape {
    bits: Vec<bool>,
}

impl AdviceTape {
    pub fn from_bits(bits: Vec<bool>) -> AdviceTape {
        AdviceTape { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// First `n` bits, zero-padded up to `total` bits.
    pub fn truncated_padded(&self, n: usize, total: usize) -> AdviceTape {
        let mut bits: Vec<bool> = self.bits.iter().copied().take(n).collect();
        bits.resize(total, false);
        AdviceTape { bits }
    }

    /// Hex serialization: bits packed most-significant-first. Returns the hex
    /// string and the explicit bit length.
    pub fn to_hex(&self) -> (String, usize) {
        let mut bytes = vec![0u8; self.bits.len().div_ceil(8)];
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                bytes[i / 8] |= 1 << (7 - i % 8);
            }
        }
        let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
        (hex, self.bits.len())
    }

    /// Inverse of [`AdviceTape::to_hex`]. The hex string must cover exactly
    /// `bit_len` bits and any padding bits in the last byte must be zero.
    pub fn from_hex(hex: &str, bit_len: usize) -> Result<AdviceTape, AdviceError> {
        if !hex.len().is_multiple_of(2) {
            return Err(AdviceError::BadHex("odd hex length".into()));
        }
        let mut bytes = Vec::with_capacity(hex.len() / 2);
        for i in (0..hex.len()).step_by(2) {
            let byte = u8::from_str_radix(&hex[i..i + 2], 16)
                .map_err(|_| AdviceError::BadHex(format!("bad hex at offset {i}")))?;
            bytes.push(byte);
        }
        if bytes.len() != bit_len.div_ceil(8) {
            return Err(AdviceError::BadHex(format!(
                "{} bytes cannot hold exactly {bit_len} bits",
                bytes.len()
            )));
        }
        let mut bits = Vec::with_capacity(bit_len);
        for i in 0..bit_len {
            bits.push(bytes[i / 8] >> (7 - i % 8) & 1 == 1);
        }
        for i in bit_len..bytes.len() * 8 {
            if bytes[i / 8] >> (7 - i % 8) & 1 == 1 {
                return Err(AdviceError::BadHex("nonzero padding bits".into()));
            }
        }
        Ok(AdviceTape { bits })
    }
}

/// Read cursor over a tape; owned by a single run.
pub struct AdviceReader<'a> {
    tape: &'a AdviceTape,
    cursor: usize,
}

impl<'a> AdviceReader<'a> {
    pub fn new(tape: &'a AdviceTape) -> AdviceReader<'a> {
        AdviceReader { tape, cursor: 0 }
    }

    pub fn read_bit(&mut self) -> Result<bool, AdviceError> {
        if self.cursor >= self.tape.len() {
            return Err(AdviceError::TapeExhausted);
        }
        let b = self.tape.bit(self.cursor);
        self.cursor += 1;
        Ok(b)
    }

    pub fn consumed(&self) -> usize {
        self.cursor
    }

    pub fn remaining(&self) -> usize {
        self.tape.len() - self.cursor
    }
}

/// Is `(X + candidate, Y)` extendable to an optimal cut of `g`?
///
/// The oracle is offline and exact: it compares the best completion over all
/// unassigned vertices against the brute-force optimum.
pub fn extendability_oracle(
    g: &Graph,
    partial: &CutAssignment,
    candidate: usize,
) -> Result<bool, AdviceError> {
    if partial.len() != g.n() {
        return Err(AdviceError::Graph(GraphError::SizeMismatch {
            got: partial.len(),
            want: g.n(),
        }));
    }
    if candidate >= g.n() {
        return Err(AdviceError::Graph(GraphError::VertexOutOfRange {
            id: candidate,
            n: g.n(),
        }));
    }
    if partial.side(candidate).is_some() {
        return Err(AdviceError::CandidateAssigned(candidate));
    }
    let (opt, _) = brute_force_mincut(g)?;
    let opt = match opt {
        CutValue::Infinite => return Ok(true),
        CutValue::Finite(v) => v,
    };
    let free: Vec<usize> = (0..g.n())
        .filter(|&v| v != candidate && partial.side(v).is_none())
        .collect();
    if free.len() > COMPLETION_CAP {
        return Err(AdviceError::Capacity {
            unassigned: free.len(),
            cap: COMPLETION_CAP,
        });
    }
    let mut base = partial.clone();
    base.assign(candidate, Side::X);
    let mut best = f64::INFINITY;
    for mask in 0u64..1 << free.len() {
        let mut a = base.clone();
        for (j, &v) in free.iter().enumerate() {
            a.assign(v, if mask >> j & 1 == 1 { Side::X } else { Side::Y });
        }
        if a.count(Side::X) == 0 || a.count(Side::Y) == 0 {
            continue;
        }
        if let CutValue::Finite(v) = cut_weight(g, &a)? {
            best = best.min(v);
        }
    }
    Ok(best.is_finite() && weight_eq(best, opt))
}

/// The `n-1`-bit optimal algorithm: `v1 -> X`, then one bit per vertex,
/// 1 meaning X. Fed by [`tape_for_optimal`], it attains the optimum on every
/// graph and every order, connected or not.
pub fn advice_optimal() -> Box<dyn OnlineCutAlgorithm> {
    Box::new(AdviceOptimal)
}

struct AdviceOptimal;

impl OnlineCutAlgorithm for AdviceOptimal {
    fn name(&self) -> &'static str {
        "advice-optimal"
    }
    fn uses_advice(&self) -> bool {
        true
    }
    fn begin(&self) -> Box<dyn CutStrategy> {
        Box::new(AdviceOptimalRun)
    }
}

struct AdviceOptimalRun;

impl CutStrategy for AdviceOptimalRun {
    fn place(
        &mut self,
        ctx: &StepContext<'_>,
        advice: Option<&mut AdviceReader<'_>>,
    ) -> Result<Side, EngineError> {
        if ctx.index == 1 {
            return Ok(Side::X);
        }
        let reader = advice.ok_or(EngineError::MissingTape)?;
        Ok(if reader.read_bit()? { Side::X } else { Side::Y })
    }
}

/// The `n-1` extendability answers along the greedy extension of `(X1, Y1)`.
pub fn tape_for_optimal(g: &Graph, order: &ArrivalOrder) -> Result<AdviceTape, AdviceError> {
    if order.len() != g.n() {
        return Err(AdviceError::Graph(GraphError::SizeMismatch {
            got: order.len(),
            want: g.n(),
        }));
    }
    let mut partial = CutAssignment::unassigned(g.n());
    partial.assign(order.vertex_at(0), Side::X);
    let mut bits = Vec::with_capacity(g.n().saturating_sub(1));
    for i in 1..g.n() {
        let v = order.vertex_at(i);
        let extendable = extendability_oracle(g, &partial, v)?;
        partial.assign(v, if extendable { Side::X } else { Side::Y });
        bits.push(extendable);
    }
    Ok(AdviceTape::from_bits(bits))
}

/// Advice scheme that encodes the arrival position of one minimum-degree
/// vertex in fixed-width `ceil(log2 n)` bits; that vertex ends up alone on one
/// side, so the value is the minimum degree.
///
/// An out-of-range encoded position leaves one side empty and surfaces as an
/// empty-side error when the run completes.
pub fn min_degree_advice() -> Box<dyn OnlineCutAlgorithm> {
    Box::new(MinDegreeAdvice)
}

struct MinDegreeAdvice;

impl OnlineCutAlgorithm for MinDegreeAdvice {
    fn name(&self) -> &'static str {
        "min-degree-advice"
    }
    fn uses_advice(&self) -> bool {
        true
    }
    fn begin(&self) -> Box<dyn CutStrategy> {
        Box::new(MinDegreeRun { target: 0 })
    }
}

struct MinDegreeRun {
    target: u64,
}

impl CutStrategy for MinDegreeRun {
    fn place(
        &mut self,
        ctx: &StepContext<'_>,
        advice: Option<&mut AdviceReader<'_>>,
    ) -> Result<Side, EngineError> {
        if ctx.index == 1 {
            // the whole fixed-width tape is read up front
            let reader = advice.ok_or(EngineError::MissingTape)?;
            let width = reader.remaining();
            let mut idx = 0u64;
            for _ in 0..width {
                idx = idx << 1 | reader.read_bit()? as u64;
            }
            self.target = idx;
            return Ok(Side::X);
        }
        let position = (ctx.index - 1) as u64;
        // the target position stands alone; when the target is the first
        // arrival (already in X), everyone after it goes to Y instead
        Ok(if self.target == 0 || position == self.target {
            Side::Y
        } else {
            Side::X
        })
    }
}

/// Number of bits [`min_degree_tape`] uses for a graph on `n` vertices.
pub fn min_degree_tape_width(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Encodes the arrival position of the smallest-id minimum-degree vertex.
pub fn min_degree_tape(g: &Graph, order: &ArrivalOrder) -> Result<AdviceTape, AdviceError> {
    if order.len() != g.n() {
        return Err(AdviceError::Graph(GraphError::SizeMismatch {
            got: order.len(),
            want: g.n(),
        }));
    }
    let stats = crate::graph::degree_stats(g)?;
    let target = (0..g.n())
        .find(|&v| stats.degrees[v] == stats.min_degree)
        .expect("a nonempty graph has a minimum-degree vertex");
    let position = order
        .as_slice()
        .iter()
        .position(|&v| v == target)
        .expect("order is a permutation");
    let width = min_degree_tape_width(g.n());
    let bits = (0..width)
        .map(|i| position >> (width - 1 - i) & 1 == 1)
        .collect();
    Ok(AdviceTape::from_bits(bits))
}

/// A fooling pair: two instances the algorithm cannot distinguish under the
/// bit budget, forcing a suboptimal cut on at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct FoolingPair {
    pub index_a: usize,
    pub index_b: usize,
    /// Index of the instance on which the run came out suboptimal.
    pub fooled: usize,
    /// Realized cut value on the fooled instance.
    pub forced_value: f64,
    /// Optimal value of the fooled instance.
    pub opt_value: f64,
}

/// Searches a family sharing an independent-set prefix for two instances whose
/// tapes agree once truncated to `budget` bits but whose optimal partitions
/// restrict differently to the prefix. Running the algorithm with the shared
/// truncated tape (zero-padded) then forces a suboptimal cut on one of them.
///
/// Returns `None` when the family's distinct restricted optima fit inside the
/// `2^budget` tape space.
pub fn fooling_pair_search(
    alg: &dyn OnlineCutAlgorithm,
    instances: &[Graph],
    prefix: &[usize],
    budget: usize,
) -> Result<Option<FoolingPair>, AdviceError> {
    if !alg.uses_advice() {
        return Err(AdviceError::NotAdviceAlgorithm);
    }
    if instances.is_empty() {
        return Ok(None);
    }
    let n = instances[0].n();
    let order = {
        let mut seq: Vec<usize> = prefix.to_vec();
        seq.extend((0..n).filter(|v| !prefix.contains(v)));
        ArrivalOrder::new(seq)?
    };

    let mut restrictions = Vec::with_capacity(instances.len());
    for g in instances {
        if g.n() != n {
            return Err(AdviceError::Graph(GraphError::SizeMismatch {
                got: g.n(),
                want: n,
            }));
        }
        restrictions.push(consistent_restriction(g, prefix)?);
    }
    let distinct: std::collections::BTreeSet<u64> = restrictions.iter().copied().collect();
    if budget >= 64 || distinct.len() <= 1usize << budget {
        return Ok(None);
    }

    // pigeonhole: more distinct restrictions than truncated-tape keys
    let mut by_key: std::collections::BTreeMap<Vec<bool>, (usize, u64)> =
        std::collections::BTreeMap::new();
    let mut pair: Option<(usize, usize)> = None;
    for (idx, g) in instances.iter().enumerate() {
        let tape = tape_for_optimal(g, &order)?;
        let key: Vec<bool> = tape.bits().iter().copied().take(budget).collect();
        match by_key.get(&key) {
            Some(&(first, r)) if r != restrictions[idx] => {
                pair = Some((first, idx));
                break;
            }
            Some(_) => {}
            None => {
                by_key.insert(key, (idx, restrictions[idx]));
            }
        }
    }
    let (ia, ib) = pair.ok_or_else(|| {
        AdviceError::ContractViolation(
            "pigeonhole promised a colliding pair but none was found".into(),
        )
    })?;

    let shared = tape_for_optimal(&instances[ia], &order)?.truncated_padded(budget, n - 1);
    for &idx in &[ia, ib] {
        let g = &instances[idx];
        let record = crate::engine::run(g, &order, alg, Some(&shared))?;
        let (opt, _) = brute_force_mincut(g)?;
        let (value, opt) = (record.value.finite(), opt.finite());
        if weight_cmp(value, opt) == Ordering::Greater {
            return Ok(Some(FoolingPair {
                index_a: ia,
                index_b: ib,
                fooled: idx,
                forced_value: value,
                opt_value: opt,
            }));
        }
    }
    Err(AdviceError::ContractViolation(
        "neither instance of the colliding pair was fooled".into(),
    ))
}
