//! Loopless weighted graphs, cut assignments, and arrival orders.
//!
//! All algorithms in this crate run on [`Graph`]: vertices `0..n`, at most one
//! stored edge per unordered pair, nonnegative `f64` weights. Integer weights
//! double as parallel-edge multiplicities, so the unweighted, multigraph, and
//! weighted problems share one representation.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// Comparison tolerance for weights that are not integer-valued.
pub const WEIGHT_EPS: f64 = 1e-9;

/// Largest vertex count the text parser accepts.
pub const MAX_PARSE_VERTICES: usize = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("loop edge {0}-{0} is not allowed")]
    LoopEdge(usize),
    #[error("vertex id {id} out of range for n={n}")]
    VertexOutOfRange { id: usize, n: usize },
    #[error("negative or non-finite weight {w} on edge {u}-{v}")]
    BadWeight { u: usize, v: usize, w: f64 },
    #[error("assignment is incomplete: vertex {0} is unassigned")]
    IncompleteAssignment(usize),
    #[error("assignment covers {got} vertices but the graph has {want}")]
    SizeMismatch { got: usize, want: usize },
    #[error("one side of the partition is empty")]
    EmptySide,
    #[error("vertex sets overlap at {0}")]
    OverlappingSets(usize),
    #[error("prefix length {i} out of range 1..={n}")]
    PrefixOutOfRange { i: usize, n: usize },
    #[error("order is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Equality on weights with tolerance `WEIGHT_EPS`.
///
/// Tie rules in the greedy algorithms assume exact edge counts. Integer-valued
/// inputs sum exactly in an `f64` and distinct integers differ by at least 1,
/// so for them this tolerance comparison coincides with exact comparison.
pub fn weight_eq(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= WEIGHT_EPS
}

/// Total order on weights consistent with [`weight_eq`].
pub fn weight_cmp(a: f64, b: f64) -> Ordering {
    if weight_eq(a, b) {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Side of a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::X => write!(f, "X"),
            Side::Y => write!(f, "Y"),
        }
    }
}

/// A cut value, with the `Infinite` sentinel for single-vertex graphs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CutValue {
    Finite(f64),
    Infinite,
}

impl CutValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, CutValue::Infinite)
    }

    /// The finite value; panics on `Infinite`.
    pub fn finite(&self) -> f64 {
        match self {
            CutValue::Finite(v) => *v,
            CutValue::Infinite => panic!("cut value is infinite"),
        }
    }
}

impl fmt::Display for CutValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutValue::Finite(v) => write!(f, "{v}"),
            CutValue::Infinite => write!(f, "inf"),
        }
    }
}

/// One stored edge; `u < v` after normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Loopless graph with folded multi-edges and nonnegative weights.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        // adj is derived from edges
        self.n == other.n && self.edges == other.edges
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<Edge>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.n,
            edges: self.edges.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(de)?;
        Graph::new(repr.n, repr.edges.iter().map(|e| (e.u, e.v, e.w)))
            .map_err(serde::de::Error::custom)
    }
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples, folding duplicate pairs by
    /// summing their weights.
    pub fn new(
        n: usize,
        triples: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Graph, GraphError> {
        let mut folded: std::collections::BTreeMap<(usize, usize), f64> =
            std::collections::BTreeMap::new();
        for (u, v, w) in triples {
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            for id in [u, v] {
                if id >= n {
                    return Err(GraphError::VertexOutOfRange { id, n });
                }
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(GraphError::BadWeight { u, v, w });
            }
            let key = (u.min(v), u.max(v));
            *folded.entry(key).or_insert(0.0) += w;
        }
        let edges: Vec<Edge> = folded
            .into_iter()
            .map(|((u, v), w)| Edge { u, v, w })
            .collect();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        Ok(Graph { n, edges, adj })
    }

    /// Unit-weight graph from vertex pairs.
    pub fn unweighted(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph, GraphError> {
        Graph::new(n, pairs.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n, std::iter::empty()).unwrap()
    }

    /// Path 0-1-...-(n-1).
    pub fn path(n: usize) -> Graph {
        Graph::unweighted(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Graph::unweighted(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Graph {
        Graph::unweighted(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    /// Star K_{1,leaves} with the center at vertex 0.
    pub fn star(leaves: usize) -> Graph {
        Graph::unweighted(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    /// Same vertices and edge pairs, new weights in stored-edge order.
    pub fn with_edge_weights(&self, weights: &[f64]) -> Result<Graph, GraphError> {
        if weights.len() != self.edges.len() {
            return Err(GraphError::SizeMismatch {
                got: weights.len(),
                want: self.edges.len(),
            });
        }
        Graph::new(
            self.n,
            self.edges
                .iter()
                .zip(weights)
                .map(|(e, &w)| (e.u, e.v, w)),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored edge records (folded pairs).
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn weighted_degree(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum()
    }

    /// Weight between `u` and `v`, 0 if not adjacent.
    pub fn weight_between(&self, u: usize, v: usize) -> f64 {
        self.adj[u]
            .iter()
            .find(|&&(x, _)| x == v)
            .map_or(0.0, |&(_, w)| w)
    }

    /// Connectivity over edges of positive weight.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, w) in &self.adj[u] {
                if w > 0.0 && !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Parses the text format: `p <n> <m>` then `m` lines `e <u> <v> [<w>]`.
    /// `#` comment lines and blank lines are ignored; duplicate pairs fold.
    /// Declared vertex counts are capped at [`MAX_PARSE_VERTICES`].
    pub fn from_text(text: &str) -> Result<Graph, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut triples = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let tag = it.next().unwrap();
            let parse = |tok: Option<&str>, what: &str| -> Result<f64, GraphError> {
                tok.ok_or_else(|| GraphError::Parse {
                    line: lineno + 1,
                    msg: format!("missing {what}"),
                })?
                .parse::<f64>()
                .map_err(|_| GraphError::Parse {
                    line: lineno + 1,
                    msg: format!("bad {what}"),
                })
            };
            match tag {
                "p" => {
                    if header.is_some() {
                        return Err(GraphError::Parse {
                            line: lineno + 1,
                            msg: "duplicate header".into(),
                        });
                    }
                    let n = parse(it.next(), "vertex count")?;
                    let m = parse(it.next(), "edge count")?;
                    if n.fract() != 0.0
                        || m.fract() != 0.0
                        || n < 0.0
                        || m < 0.0
                        || n > MAX_PARSE_VERTICES as f64
                    {
                        return Err(GraphError::Parse {
                            line: lineno + 1,
                            msg: format!(
                                "counts must be nonnegative integers with n <= {MAX_PARSE_VERTICES}"
                            ),
                        });
                    }
                    header = Some((n as usize, m as usize));
                }
                "e" => {
                    if header.is_none() {
                        return Err(GraphError::Parse {
                            line: lineno + 1,
                            msg: "edge before header".into(),
                        });
                    }
                    let u = parse(it.next(), "endpoint")?;
                    let v = parse(it.next(), "endpoint")?;
                    if u.fract() != 0.0 || v.fract() != 0.0 || u < 0.0 || v < 0.0 {
                        return Err(GraphError::Parse {
                            line: lineno + 1,
                            msg: "endpoints must be nonnegative integers".into(),
                        });
                    }
                    let w = match it.next() {
                        Some(tok) => tok.parse::<f64>().map_err(|_| GraphError::Parse {
                            line: lineno + 1,
                            msg: "bad weight".into(),
                        })?,
                        None => 1.0,
                    };
                    triples.push((u as usize, v as usize, w));
                }
                _ => {
                    return Err(GraphError::Parse {
                        line: lineno + 1,
                        msg: format!("unknown line tag '{tag}'"),
                    })
                }
            }
        }
        let (n, m) = header.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing `p <n> <m>` header".into(),
        })?;
        if triples.len() != m {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("header declares {m} edges, found {}", triples.len()),
            });
        }
        Graph::new(n, triples)
    }

    /// Inverse of [`Graph::from_text`] up to comment lines and edge folding.
    pub fn to_text(&self) -> String {
        let mut out = format!("p {} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            if e.w == 1.0 {
                out.push_str(&format!("e {} {}\n", e.u, e.v));
            } else {
                out.push_str(&format!("e {} {} {}\n", e.u, e.v, e.w));
            }
        }
        out
    }
}

/// Per-vertex side labels; partial during online runs, total at the end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutAssignment {
    sides: Vec<Option<Side>>,
}

impl CutAssignment {
    pub fn unassigned(n: usize) -> CutAssignment {
        CutAssignment {
            sides: vec![None; n],
        }
    }

    /// Complete assignment with the given vertices in X and the rest in Y.
    pub fn from_x_set(n: usize, x: impl IntoIterator<Item = usize>) -> CutAssignment {
        let mut sides = vec![Some(Side::Y); n];
        for v in x {
            sides[v] = Some(Side::X);
        }
        CutAssignment { sides }
    }

    /// Complete assignment from a bitmask: bit `v` set means `v` is in X.
    pub fn from_x_mask(n: usize, mask: u64) -> CutAssignment {
        debug_assert!(n <= 64);
        CutAssignment {
            sides: (0..n)
                .map(|v| Some(if mask >> v & 1 == 1 { Side::X } else { Side::Y }))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn side(&self, v: usize) -> Option<Side> {
        self.sides[v]
    }

    pub fn assign(&mut self, v: usize, side: Side) {
        self.sides[v] = Some(side);
    }

    pub fn is_complete(&self) -> bool {
        self.sides.iter().all(|s| s.is_some())
    }

    pub fn count(&self, side: Side) -> usize {
        self.sides.iter().filter(|&&s| s == Some(side)).count()
    }

    pub fn vertices_on(&self, side: Side) -> Vec<usize> {
        (0..self.sides.len())
            .filter(|&v| self.sides[v] == Some(side))
            .collect()
    }

    /// Complete with both sides nonempty.
    pub fn is_valid_cut(&self) -> bool {
        self.is_complete() && self.count(Side::X) > 0 && self.count(Side::Y) > 0
    }

    pub fn swapped(&self) -> CutAssignment {
        CutAssignment {
            sides: self.sides.iter().map(|s| s.map(Side::flip)).collect(),
        }
    }

    /// X-side bitmask; only defined for `n <= 64`.
    pub fn x_mask(&self) -> u64 {
        debug_assert!(self.sides.len() <= 64);
        let mut mask = 0u64;
        for (v, s) in self.sides.iter().enumerate() {
            if *s == Some(Side::X) {
                mask |= 1 << v;
            }
        }
        mask
    }

    /// Equal as bipartitions, i.e. equal up to a global side swap.
    pub fn same_bipartition(&self, other: &CutAssignment) -> bool {
        self == other || *self == other.swapped()
    }
}

/// A permutation of the vertex ids, driving vertex-arrival revelation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrivalOrder {
    order: Vec<usize>,
}

impl ArrivalOrder {
    pub fn new(order: Vec<usize>) -> Result<ArrivalOrder, GraphError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return Err(GraphError::NotAPermutation(n));
            }
            seen[v] = true;
        }
        Ok(ArrivalOrder { order })
    }

    pub fn identity(n: usize) -> ArrivalOrder {
        ArrivalOrder {
            order: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    /// Vertex arriving at 0-based position `i`.
    pub fn vertex_at(&self, i: usize) -> usize {
        self.order[i]
    }
}

/// Total weight of edges crossing a complete, valid cut.
///
/// A single-vertex graph has no cut; per convention the value is `Infinite`.
pub fn cut_weight(g: &Graph, a: &CutAssignment) -> Result<CutValue, GraphError> {
    if a.len() != g.n() {
        return Err(GraphError::SizeMismatch {
            got: a.len(),
            want: g.n(),
        });
    }
    if let Some(v) = (0..a.len()).find(|&v| a.side(v).is_none()) {
        return Err(GraphError::IncompleteAssignment(v));
    }
    if g.n() == 1 {
        return Ok(CutValue::Infinite);
    }
    if a.count(Side::X) == 0 || a.count(Side::Y) == 0 {
        return Err(GraphError::EmptySide);
    }
    let mut total = 0.0;
    for e in g.edges() {
        if a.side(e.u) != a.side(e.v) {
            total += e.w;
        }
    }
    Ok(CutValue::Finite(total))
}

/// Total weight of edges with one endpoint in `s` and one in `t`.
pub fn crossing_weight(g: &Graph, s: &[usize], t: &[usize]) -> Result<f64, GraphError> {
    let mut mark = vec![0u8; g.n()];
    for &v in s {
        if v >= g.n() {
            return Err(GraphError::VertexOutOfRange { id: v, n: g.n() });
        }
        mark[v] = 1;
    }
    for &v in t {
        if v >= g.n() {
            return Err(GraphError::VertexOutOfRange { id: v, n: g.n() });
        }
        if mark[v] == 1 {
            return Err(GraphError::OverlappingSets(v));
        }
        mark[v] = 2;
    }
    let mut total = 0.0;
    for e in g.edges() {
        if mark[e.u] != 0 && mark[e.v] != 0 && mark[e.u] != mark[e.v] {
            total += e.w;
        }
    }
    Ok(total)
}

/// Induced subgraph on the first `i` arrivals, with `remap[j]` giving the
/// original id of prefix vertex `j`.
pub fn revealed_prefix(
    g: &Graph,
    order: &ArrivalOrder,
    i: usize,
) -> Result<(Graph, Vec<usize>), GraphError> {
    if order.len() != g.n() {
        return Err(GraphError::SizeMismatch {
            got: order.len(),
            want: g.n(),
        });
    }
    if i < 1 || i > g.n() {
        return Err(GraphError::PrefixOutOfRange { i, n: g.n() });
    }
    let remap: Vec<usize> = order.as_slice()[..i].to_vec();
    let mut pos = vec![usize::MAX; g.n()];
    for (j, &v) in remap.iter().enumerate() {
        pos[v] = j;
    }
    let triples = g.edges().iter().filter_map(|e| {
        let (pu, pv) = (pos[e.u], pos[e.v]);
        (pu != usize::MAX && pv != usize::MAX).then_some((pu, pv, e.w))
    });
    Ok((Graph::new(i, triples)?, remap))
}

/// Weighted degree sequence, minimum degree, and mean degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeStats {
    pub degrees: Vec<f64>,
    pub min_degree: f64,
    pub mean_degree: f64,
}

pub fn degree_stats(g: &Graph) -> Result<DegreeStats, GraphError> {
    if g.n() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let degrees: Vec<f64> = (0..g.n()).map(|v| g.weighted_degree(v)).collect();
    let min_degree = degrees.iter().copied().fold(f64::INFINITY, f64::min);
    let mean_degree = degrees.iter().sum::<f64>() / g.n() as f64;
    Ok(DegreeStats {
        degrees,
        min_degree,
        mean_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::path(3)
    }

    #[test]
    fn cut_weight_p3_center() {
        // both edges cross when the center stands alone
        let a = CutAssignment::from_x_set(3, [1]);
        assert_eq!(cut_weight(&p3(), &a).unwrap(), CutValue::Finite(2.0));
    }

    #[test]
    fn cut_weight_k4_singleton() {
        let a = CutAssignment::from_x_set(4, [0]);
        assert_eq!(
            cut_weight(&Graph::complete(4), &a).unwrap(),
            CutValue::Finite(3.0)
        );
    }

    #[test]
    fn cut_weight_half_weights() {
        let g = Graph::new(3, [(0, 1, 0.5), (1, 2, 0.5)]).unwrap();
        let a = CutAssignment::from_x_set(3, [0]);
        assert_eq!(cut_weight(&g, &a).unwrap(), CutValue::Finite(0.5));
    }

    #[test]
    fn cut_weight_errors() {
        let g = p3();
        let mut partial = CutAssignment::unassigned(3);
        partial.assign(0, Side::X);
        assert!(matches!(
            cut_weight(&g, &partial),
            Err(GraphError::IncompleteAssignment(1))
        ));
        let all_x = CutAssignment::from_x_set(3, [0, 1, 2]);
        assert_eq!(cut_weight(&g, &all_x), Err(GraphError::EmptySide));
        let wrong = CutAssignment::from_x_set(2, [0]);
        assert!(matches!(
            cut_weight(&g, &wrong),
            Err(GraphError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn single_vertex_is_infinite() {
        let g = Graph::empty(1);
        let a = CutAssignment::from_x_set(1, [0]);
        assert!(cut_weight(&g, &a).unwrap().is_infinite());
    }

    #[test]
    fn crossing_weight_examples() {
        assert_eq!(
            crossing_weight(&Graph::complete(4), &[0], &[1, 2]).unwrap(),
            2.0
        );
        assert_eq!(crossing_weight(&p3(), &[0], &[2]).unwrap(), 0.0);
        let star = Graph::star(3);
        assert_eq!(crossing_weight(&star, &[0], &[1, 2, 3]).unwrap(), 3.0);
        assert_eq!(
            crossing_weight(&star, &[0, 1], &[1, 2]),
            Err(GraphError::OverlappingSets(1))
        );
    }

    #[test]
    fn prefix_of_triangle() {
        let g = Graph::complete(3);
        let order = ArrivalOrder::new(vec![2, 0, 1]).unwrap();
        let (pre, remap) = revealed_prefix(&g, &order, 2).unwrap();
        assert_eq!(pre.n(), 2);
        assert_eq!(pre.m(), 1);
        assert_eq!(remap, vec![2, 0]);
    }

    #[test]
    fn prefix_full_is_isomorphic_identity() {
        let g = Graph::new(4, [(0, 1, 2.0), (2, 3, 1.0)]).unwrap();
        let order = ArrivalOrder::identity(4);
        let (pre, remap) = revealed_prefix(&g, &order, 4).unwrap();
        assert_eq!(pre, g);
        assert_eq!(remap, vec![0, 1, 2, 3]);
    }

    #[test]
    fn prefix_monotone_edges() {
        let g = Graph::complete(5);
        let order = ArrivalOrder::new(vec![4, 2, 0, 3, 1]).unwrap();
        for i in 1..5 {
            let (a, ra) = revealed_prefix(&g, &order, i).unwrap();
            let (b, rb) = revealed_prefix(&g, &order, i + 1).unwrap();
            for e in a.edges() {
                // same original pair must appear in the longer prefix
                let (ou, ov) = (ra[e.u], ra[e.v]);
                let found = b.edges().iter().any(|f| {
                    let (fu, fv) = (rb[f.u], rb[f.v]);
                    (fu, fv) == (ou, ov) || (fv, fu) == (ou, ov)
                });
                assert!(found);
            }
        }
    }

    #[test]
    fn degree_stats_examples() {
        let s = degree_stats(&Graph::star(4)).unwrap();
        assert_eq!(s.min_degree, 1.0);
        assert!((s.mean_degree - 8.0 / 5.0).abs() < 1e-12);
        let k4 = degree_stats(&Graph::complete(4)).unwrap();
        assert_eq!(k4.min_degree, 3.0);
        assert_eq!(k4.mean_degree, 3.0);
    }

    #[test]
    fn handshake_identity() {
        let g = Graph::new(6, [(0, 1, 2.0), (1, 2, 0.5), (3, 4, 1.0), (4, 5, 3.0)]).unwrap();
        let s = degree_stats(&g).unwrap();
        let sum: f64 = s.degrees.iter().sum();
        assert!((sum - 2.0 * g.total_weight()).abs() < 1e-12);
    }

    #[test]
    fn cut_symmetry_and_decomposition() {
        let g = Graph::new(5, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.5), (3, 4, 1.0), (0, 4, 1.0)])
            .unwrap();
        let a = CutAssignment::from_x_set(5, [0, 2]);
        let v1 = cut_weight(&g, &a).unwrap().finite();
        let v2 = cut_weight(&g, &a.swapped()).unwrap().finite();
        assert_eq!(v1, v2);
        let cross = crossing_weight(&g, &a.vertices_on(Side::X), &a.vertices_on(Side::Y)).unwrap();
        assert_eq!(v1, cross);
    }

    #[test]
    fn multi_edges_fold_into_weight() {
        let g = Graph::new(2, [(0, 1, 1.0), (1, 0, 1.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.edges()[0].w, 3.0);
    }

    #[test]
    fn rejects_loops_and_bad_weights() {
        assert!(matches!(
            Graph::new(3, [(1, 1, 1.0)]),
            Err(GraphError::LoopEdge(1))
        ));
        assert!(matches!(
            Graph::new(3, [(0, 3, 1.0)]),
            Err(GraphError::VertexOutOfRange { id: 3, n: 3 })
        ));
        assert!(matches!(
            Graph::new(3, [(0, 1, -1.0)]),
            Err(GraphError::BadWeight { .. })
        ));
        assert!(matches!(
            Graph::new(3, [(0, 1, f64::NAN)]),
            Err(GraphError::BadWeight { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let g = Graph::new(4, [(0, 1, 1.0), (1, 2, 2.5), (0, 3, 1.0)]).unwrap();
        let text = g.to_text();
        let back = Graph::from_text(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn text_parsing_details() {
        let g = Graph::from_text("# comment\np 3 2\ne 0 1\ne 1 2 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.weight_between(1, 2), 2.0);
        assert!(Graph::from_text("e 0 1\n").is_err());
        assert!(Graph::from_text("p 3 2\ne 0 1\n").is_err());
        assert!(Graph::from_text("p 2 1\ne 0 0\n").is_err());
        assert!(Graph::from_text("q 1 2\n").is_err());
    }

    #[test]
    fn order_validation() {
        assert!(ArrivalOrder::new(vec![0, 2, 1]).is_ok());
        assert!(ArrivalOrder::new(vec![0, 0, 1]).is_err());
        assert!(ArrivalOrder::new(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn weight_eq_integer_exactness() {
        assert!(weight_eq(2.0, 2.0));
        assert!(!weight_eq(2.0, 3.0));
        assert!(weight_eq(0.5, 0.5 + 1e-12));
        assert!(!weight_eq(0.5, 0.5 + 1e-6));
        assert_eq!(weight_cmp(1.5, 1.5 + 1e-12), Ordering::Equal);
        assert_eq!(weight_cmp(1.0, 2.0), Ordering::Less);
    }
}
