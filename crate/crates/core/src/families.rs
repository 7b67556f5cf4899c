//! Constructive families of weakly labeled graphs.
//!
//! Finite families are returned as [`LabeledGraph`]s and always pass
//! [`verify_weak`] before they are handed out. Infinite families are only
//! available through [`WindowedFamily::neighbors`] and finite windows.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Endpoint, GraphError, GraphView, IntegerInterval, LabeledGraph};
use crate::harmonic::verify_weak;
use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("a star needs a positive even number of leaves, got {0}")]
    OddStar(usize),
    #[error("star-path needs m >= 1, odd n >= 3 and k <= (n-1)/2; got m={m}, n={n}, k={k}")]
    StarPathParams { m: usize, n: usize, k: usize },
    #[error("c-grid needs k >= 2 and h >= 2; got k={k}, h={h}")]
    CGridParams { k: usize, h: usize },
    #[error("vertex {0} of the left graph is not a leaf")]
    LeftNotLeaf(usize),
    #[error("vertex 0 of the right graph is not a leaf")]
    RightNotLeaf,
    #[error("glued leaves hang from {left} and {right}, which sum to {} instead of {expected}", left + right)]
    SumMismatch { left: i64, right: i64, expected: i64 },
    #[error("the right-hand family must live on [0, inf], not {0}")]
    RightDomain(String),
    #[error("base pair ({i}, {k}) needs k >= 2 and 0 <= i < k")]
    InvalidPair { i: i64, k: i64 },
    #[error("cannot parse base `{0}`; expected pairs like 0:2,1:3")]
    BaseSyntax(String),
    #[error("window [{lo}, {hi}] is empty")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error("window width {width} is below the {needed} needed to expose every chord")]
    WindowTooSmall { width: i64, needed: i64 },
    #[error("window [{lo}, {hi}] leaves fewer than three vertices inside {domain}")]
    WindowOutsideDomain { lo: i64, hi: i64, domain: String },
    #[error("generated graph fails verification at vertices {0:?}")]
    NotVerified(Vec<usize>),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn verified(g: LabeledGraph) -> Result<LabeledGraph, FamilyError> {
    let report = verify_weak(&g);
    if report.is_verified() {
        Ok(g)
    } else {
        Err(FamilyError::NotVerified(report.failures().map(|b| b.vertex).collect()))
    }
}

/// The path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Result<LabeledGraph, FamilyError> {
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
    verified(LabeledGraph::new(n, edges)?)
}

/// `K_{1,n_leaves}` with the center labeled `n_leaves / 2`.
pub fn star(n_leaves: usize) -> Result<LabeledGraph, FamilyError> {
    if n_leaves == 0 || n_leaves % 2 == 1 {
        return Err(FamilyError::OddStar(n_leaves));
    }
    let c = n_leaves / 2;
    let edges: Vec<(usize, usize)> = (0..=n_leaves).filter(|&v| v != c).map(|v| (v, c)).collect();
    verified(LabeledGraph::new(n_leaves + 1, edges)?)
}

/// A path through the multiples of `m` from `k m` to `(n-k-1) m`, with every
/// other label in `[0, (n-1) m]` hung as a leaf on the central vertex.
/// `k = 0, m = 1` is the path and `k = (n-1)/2, m = 1` the even star.
pub fn star_path(m: usize, n: usize, k: usize) -> Result<LabeledGraph, FamilyError> {
    if m == 0 || n < 3 || n.is_multiple_of(2) || k > (n - 1) / 2 {
        return Err(FamilyError::StarPathParams { m, n, k });
    }
    let top = (n - 1) * m;
    let c = top / 2;
    let on_path: Vec<usize> = (k..n - k).map(|j| j * m).collect();
    let mut edges: Vec<(usize, usize)> = on_path.windows(2).map(|p| (p[0], p[1])).collect();
    for v in 0..=top {
        if v % m != 0 || v < k * m || v > (n - k - 1) * m {
            edges.push((v, c));
        }
    }
    verified(LabeledGraph::new(top + 1, edges)?)
}

/// The grid-like family on `[0, (h+1)k - 2]`: unit steps `{a, a+1}` for
/// `k-1 <= a <= hk-2`, and jumps `{a, a+k}` for `a <= hk-2` except at
/// residues `k-1` mod `k`.
pub fn c_grid(k: usize, h: usize) -> Result<LabeledGraph, FamilyError> {
    if k < 2 || h < 2 {
        return Err(FamilyError::CGridParams { k, h });
    }
    let n = (h + 1) * k - 1;
    let last = h * k - 2;
    let mut edges = Vec::new();
    for a in 0..=last {
        if a + 1 >= k {
            edges.push((a, a + 1));
        }
        if a % k != k - 1 {
            edges.push((a, a + k));
        }
    }
    verified(LabeledGraph::new(n, edges)?)
}

/// Checks the gluing conditions: `left_leaf` is a leaf hanging from `v`,
/// the right side's 0 is a leaf hanging from `w`, and `v + w = left_leaf`.
fn check_glue(left: &LabeledGraph, right_neighbors_of_zero: &[i64]) -> Result<(), FamilyError> {
    let last = left.n() - 1;
    if !left.is_leaf(last) {
        return Err(FamilyError::LeftNotLeaf(last));
    }
    if right_neighbors_of_zero.len() != 1 {
        return Err(FamilyError::RightNotLeaf);
    }
    let v = left.neighbors(last)[0] as i64;
    let w = right_neighbors_of_zero[0];
    if v + w != last as i64 {
        return Err(FamilyError::SumMismatch {
            left: v,
            right: w,
            expected: last as i64,
        });
    }
    Ok(())
}

/// Glues the last vertex of `left` to vertex 0 of `right`, shifting the
/// labels of `right` by `left.n() - 1`.
pub fn coalesce(left: &LabeledGraph, right: &LabeledGraph) -> Result<LabeledGraph, FamilyError> {
    let right_zero: Vec<i64> = right.neighbors(0).iter().map(|&w| w as i64).collect();
    check_glue(left, &right_zero)?;
    let shift = left.n() - 1;
    let mut edges = left.edges();
    edges.extend(right.edges().into_iter().map(|(a, b)| (a + shift, b + shift)));
    verified(LabeledGraph::new(shift + right.n(), edges)?)
}

/// Left fold of [`coalesce`] over `graphs`.
pub fn coalesce_chain(graphs: &[LabeledGraph]) -> Result<LabeledGraph, FamilyError> {
    let (first, rest) = graphs
        .split_first()
        .ok_or(FamilyError::Graph(GraphError::TooFewVertices(0)))?;
    rest.iter().try_fold(first.clone(), |acc, g| coalesce(&acc, g))
}

/// Glues a finite graph in front of a family living on `[0, inf]`.
pub fn coalesce_onto(left: &LabeledGraph, right: WindowedFamily) -> Result<WindowedFamily, FamilyError> {
    let domain = right.domain();
    if domain.lo() != Endpoint::Finite(0) {
        return Err(FamilyError::RightDomain(domain.to_string()));
    }
    check_glue(left, &right.neighbors(0))?;
    Ok(WindowedFamily::Coalesced {
        left: left.clone(),
        right: Box::new(right),
    })
}

/// A set of chord classes `(i, k)` with `0 <= i < k`, `k >= 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbBase(BTreeSet<(i64, i64)>);

impl PbBase {
    pub fn new<I: IntoIterator<Item = (i64, i64)>>(pairs: I) -> Result<Self, FamilyError> {
        let mut set = BTreeSet::new();
        for (i, k) in pairs {
            if k < 2 || i < 0 || i >= k {
                return Err(FamilyError::InvalidPair { i, k });
            }
            set.insert((i, k));
        }
        Ok(PbBase(set))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Largest chord span, 1 for the bare path.
    pub fn max_span(&self) -> i64 {
        self.0.iter().map(|&(_, k)| k).max().unwrap_or(1)
    }
}

impl FromStr for PbBase {
    type Err = FamilyError;

    /// `"0:2,1:3,3:5"`; the empty string is the empty base.
    fn from_str(s: &str) -> Result<Self, FamilyError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Ok(PbBase::default());
        }
        let mut pairs = Vec::new();
        for tok in compact.split(',') {
            let bad = || FamilyError::BaseSyntax(tok.to_string());
            let (i, k) = tok.split_once(':').ok_or_else(bad)?;
            pairs.push((i.parse().map_err(|_| bad())?, k.parse().map_err(|_| bad())?));
        }
        PbBase::new(pairs)
    }
}

impl fmt::Display for PbBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(i, k)| format!("{i}:{k}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// An infinite labeled graph given by a neighbor oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum WindowedFamily {
    /// Copies of a labeled graph on `[0, n-1]` stacked along ℤ, with vertex
    /// `(v, s)` labeled `v + s n` and vertical edges above non-leaves only.
    InnerCylinder(LabeledGraph),
    /// The path on ℤ plus every chord `{a, a+k}` with `a = i mod k`.
    Pb(PbBase),
    /// The induced subgraph on the labels `>= 0`.
    HalfLine(Box<WindowedFamily>),
    /// A finite graph glued in front of a family on `[0, inf]`.
    Coalesced {
        left: LabeledGraph,
        right: Box<WindowedFamily>,
    },
}

impl WindowedFamily {
    pub fn domain(&self) -> IntegerInterval {
        match self {
            WindowedFamily::InnerCylinder(_) | WindowedFamily::Pb(_) => IntegerInterval::integers(),
            WindowedFamily::HalfLine(_) | WindowedFamily::Coalesced { .. } => IntegerInterval::from(0),
        }
    }

    /// Sorted neighbor labels of `label`; empty outside the domain.
    pub fn neighbors(&self, label: i64) -> Vec<i64> {
        let mut out = match self {
            WindowedFamily::Pb(base) => {
                let mut out = vec![label - 1, label + 1];
                for (i, k) in base.pairs() {
                    if label.rem_euclid(k) == i {
                        out.push(label - k);
                        out.push(label + k);
                    }
                }
                out
            }
            WindowedFamily::InnerCylinder(g) => {
                let n = g.n() as i64;
                let layer = label.div_euclid(n);
                let v = label.rem_euclid(n) as usize;
                let mut out: Vec<i64> = g.neighbors(v).iter().map(|&w| w as i64 + layer * n).collect();
                if !g.is_leaf(v) {
                    out.push(label - n);
                    out.push(label + n);
                }
                out
            }
            WindowedFamily::HalfLine(inner) => {
                if label < 0 {
                    return Vec::new();
                }
                inner.neighbors(label).into_iter().filter(|&w| w >= 0).collect()
            }
            WindowedFamily::Coalesced { left, right } => {
                let shift = left.n() as i64 - 1;
                let from_left = |t: i64| left.neighbors(t as usize).iter().map(|&w| w as i64).collect::<Vec<_>>();
                let from_right = |t: i64| {
                    right
                        .neighbors(t - shift)
                        .into_iter()
                        .map(|w| w + shift)
                        .collect::<Vec<_>>()
                };
                match label {
                    t if t < 0 => Vec::new(),
                    t if t < shift => from_left(t),
                    t if t == shift => {
                        let mut out = from_left(t);
                        out.extend(from_right(t));
                        out
                    }
                    t => from_right(t),
                }
            }
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_leaf(&self, label: i64) -> bool {
        self.neighbors(label).len() == 1
    }

    /// Checks the balance equation at every non-leaf label of
    /// `[lo, hi]` inside the domain, using full neighborhoods.
    pub fn verify_window(&self, lo: i64, hi: i64) -> Result<WindowReport, FamilyError> {
        if lo > hi {
            return Err(FamilyError::EmptyWindow { lo, hi });
        }
        let domain = self.domain();
        let mut report = WindowReport {
            lo,
            hi,
            checked: 0,
            failures: Vec::new(),
        };
        for t in (lo..=hi).filter(|&t| domain.contains(t)) {
            let nb = self.neighbors(t);
            if nb.len() == 1 {
                continue;
            }
            report.checked += 1;
            let lhs: i128 = nb.iter().map(|&w| w as i128).sum();
            let rhs = nb.len() as i128 * t as i128;
            if lhs != rhs {
                report.failures.push(WindowFailure { label: t, lhs, rhs });
            }
        }
        Ok(report)
    }

    /// The induced subgraph on the labels of `[lo, hi]` in the domain.
    pub fn window(&self, lo: i64, hi: i64) -> Result<Window, FamilyError> {
        if lo > hi {
            return Err(FamilyError::EmptyWindow { lo, hi });
        }
        let domain = self.domain();
        let labels: Vec<i64> = (lo..=hi).filter(|&t| domain.contains(t)).collect();
        let outside = || FamilyError::WindowOutsideDomain {
            lo,
            hi,
            domain: domain.to_string(),
        };
        let first = *labels.first().ok_or_else(outside)?;
        let last = *labels.last().expect("non-empty");
        let mut edges = Vec::new();
        for &t in &labels {
            for w in self.neighbors(t) {
                if w > t && w <= last {
                    edges.push(((t - first) as usize, (w - first) as usize));
                }
            }
        }
        let graph = LabeledGraph::new_disconnected(labels.len(), edges).map_err(|e| match e {
            GraphError::TooFewVertices(_) => outside(),
            other => FamilyError::Graph(other),
        })?;
        Ok(Window { labels, graph })
    }

    /// Edges of the window as label pairs `(a, b)` with `a < b`.
    pub fn window_edges(&self, lo: i64, hi: i64) -> Result<BTreeSet<(i64, i64)>, FamilyError> {
        let w = self.window(lo, hi)?;
        Ok(w.graph
            .edges()
            .into_iter()
            .map(|(a, b)| (w.labels[a], w.labels[b]))
            .collect())
    }
}

/// A finite window of a [`WindowedFamily`]: vertex `i` of `graph` carries
/// the original label `labels[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub labels: Vec<i64>,
    pub graph: LabeledGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowFailure {
    pub label: i64,
    pub lhs: i128,
    pub rhs: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub lo: i64,
    pub hi: i64,
    pub checked: usize,
    pub failures: Vec<WindowFailure>,
}

impl WindowReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares two chord bases through their windows on `[lo, hi]`: returns
/// true when the windows differ exactly when the bases do. The window must
/// be at least twice the largest chord span wide.
pub fn distinct_bases_distinct_graphs(b1: &PbBase, b2: &PbBase, lo: i64, hi: i64) -> Result<bool, FamilyError> {
    let needed = 2 * b1.max_span().max(b2.max_span());
    if hi - lo < needed {
        return Err(FamilyError::WindowTooSmall { width: hi - lo, needed });
    }
    let e1 = WindowedFamily::Pb(b1.clone()).window_edges(lo, hi)?;
    let e2 = WindowedFamily::Pb(b2.clone()).window_edges(lo, hi)?;
    Ok((b1 != b2) == (e1 != e2))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpanningError {
    #[error("k must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("the {0}x{0} system is singular")]
    Singular(usize),
    #[error("the {k}x{k} system solves to ({solution}), not (k+1, ..., 2k)")]
    WrongSolution { k: usize, solution: String },
}

/// The `k x k` system determining the chord labels from the path labels:
/// rows `(1, 0, ..., 0, 1)`, `(2, -1, 0, ...)`, then the `(-1, 2, -1)` band;
/// right-hand side `(3k+1, k, 0, ..., 0)`.
pub fn spanning_system(k: usize) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let mut rows = vec![vec![0i64; k]; k];
    rows[0][0] = 1;
    rows[0][k - 1] += 1;
    if k > 1 {
        rows[1][0] = 2;
        rows[1][1] = -1;
    }
    for (r, row) in rows.iter_mut().enumerate().skip(2) {
        row[r - 2] = -1;
        row[r - 1] = 2;
        row[r] = -1;
    }
    let mut rhs = vec![0i64; k];
    rhs[0] = 3 * k as i64 + 1;
    if k > 1 {
        rhs[1] = k as i64;
    }
    let rhs = rhs
        .into_iter()
        .map(|x| BigRational::from_integer(BigInt::from(x)))
        .collect();
    (linalg::rational_matrix(&rows), rhs)
}

/// Solves [`spanning_system`] exactly and checks the solution is
/// `(k+1, ..., 2k)`.
pub fn spanning_check(k: usize) -> Result<(), SpanningError> {
    if k < 2 {
        return Err(SpanningError::TooSmall(k));
    }
    let (a, b) = spanning_system(k);
    let x = linalg::solve(&a, &b).ok_or(SpanningError::Singular(k))?;
    let expected: Vec<i64> = (k as i64 + 1..=2 * k as i64).collect();
    if linalg::is_integer_vector(&x, &expected) {
        Ok(())
    } else {
        let solution = x.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        Err(SpanningError::WrongSolution { k, solution })
    }
}
