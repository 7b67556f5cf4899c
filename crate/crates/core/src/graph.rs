//! Finite labeled graphs and multigraphs.
//!
//! A vertex *is* its label: graphs live on the integer interval `[0, n-1]`
//! and the identity map is the candidate labeling.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Smallest vertex count a labeled graph may have.
pub const MIN_VERTICES: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph needs at least {MIN_VERTICES} vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge ({0}, {1}) is out of range for {2} vertices")]
    OutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) appears more than once")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) has multiplicity zero")]
    ZeroMultiplicity(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
}

/// Read-only adjacency shared by simple graphs and multigraphs.
pub trait GraphView {
    fn vertex_count(&self) -> usize;

    /// Distinct neighbors of `v`, in increasing order.
    fn neighbor_set(&self, v: usize) -> Vec<usize>;

    /// Vertices adjacent to exactly one distinct vertex.
    fn leaves(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.neighbor_set(v).len() == 1)
            .collect()
    }

    fn is_leaf(&self, v: usize) -> bool {
        self.neighbor_set(v).len() == 1
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest vertex.
    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbor_set(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

fn normalize_pair(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A finite simple graph on `[0, n-1]`.
///
/// Adjacency lists are kept sorted, so structural equality is edge-set
/// equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl LabeledGraph {
    /// Builds a connected graph. Use [`LabeledGraph::new_disconnected`] when
    /// several components are intended.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let g = Self::new_disconnected(n, edges)?;
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn new_disconnected<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n < MIN_VERTICES {
            return Err(GraphError::TooFewVertices(n));
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::OutOfRange(a, b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let (a, b) = normalize_pair(a, b);
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(LabeledGraph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Relabels `v` to `n-1-v`.
    pub fn invert(&self) -> LabeledGraph {
        let top = self.n - 1;
        let edges = self.edges().into_iter().map(|(a, b)| (top - a, top - b));
        LabeledGraph::new_disconnected(self.n, edges).expect("inversion preserves validity")
    }

    /// Label-preserving isomorphism. Labels are a bijection onto `[0, n-1]`,
    /// so this is edge-set equality.
    pub fn labeled_equal(&self, other: &LabeledGraph) -> bool {
        self == other
    }

    /// The same graph with every edge of multiplicity one.
    pub fn to_multigraph(&self) -> LabeledMultigraph {
        let edges = self.edges().into_iter().map(|(a, b)| (a, b, BigUint::one()));
        LabeledMultigraph::new_disconnected(self.n, edges).expect("simple graph is a valid multigraph")
    }
}

impl GraphView for LabeledGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn neighbor_set(&self, v: usize) -> Vec<usize> {
        self.adj[v].clone()
    }

    fn is_leaf(&self, v: usize) -> bool {
        self.adj[v].len() == 1
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledGraph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// A finite loopless multigraph on `[0, n-1]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabeledMultigraph {
    n: usize,
    adj: Vec<BTreeMap<usize, BigUint>>,
}

impl LabeledMultigraph {
    pub fn new<I, M>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, M)>,
        M: Into<BigUint>,
    {
        let g = Self::new_disconnected(n, edges)?;
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn new_disconnected<I, M>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, M)>,
        M: Into<BigUint>,
    {
        if n < MIN_VERTICES {
            return Err(GraphError::TooFewVertices(n));
        }
        let mut adj: Vec<BTreeMap<usize, BigUint>> = vec![BTreeMap::new(); n];
        for (a, b, m) in edges {
            let m: BigUint = m.into();
            if a >= n || b >= n {
                return Err(GraphError::OutOfRange(a, b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let (a, b) = normalize_pair(a, b);
            if m.is_zero() {
                return Err(GraphError::ZeroMultiplicity(a, b));
            }
            if adj[a].contains_key(&b) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            adj[a].insert(b, m.clone());
            adj[b].insert(a, m);
        }
        Ok(LabeledMultigraph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `m_G(a, b)`; zero when the vertices are not adjacent.
    pub fn multiplicity(&self, a: usize, b: usize) -> BigUint {
        self.adj.get(a).and_then(|m| m.get(&b)).cloned().unwrap_or_default()
    }

    /// Neighbors of `v` with their multiplicities, in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, &BigUint)> + '_ {
        self.adj[v].iter().map(|(&w, m)| (w, m))
    }

    /// `deg(v)`, counting parallel edges.
    pub fn degree(&self, v: usize) -> BigUint {
        self.adj[v].values().sum()
    }

    /// Edges as `(a, b, m)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, BigUint)> {
        let mut out = Vec::new();
        for (a, map) in self.adj.iter().enumerate() {
            out.extend(map.range(a + 1..).map(|(&b, m)| (a, b, m.clone())));
        }
        out
    }

    pub fn invert(&self) -> LabeledMultigraph {
        let top = self.n - 1;
        let edges = self.edges().into_iter().map(|(a, b, m)| (top - a, top - b, m));
        LabeledMultigraph::new_disconnected(self.n, edges).expect("inversion preserves validity")
    }

    pub fn labeled_equal(&self, other: &LabeledMultigraph) -> bool {
        self == other
    }

    /// The underlying simple graph `sG`.
    pub fn simplification(&self) -> LabeledGraph {
        let edges = self.edges().into_iter().map(|(a, b, _)| (a, b));
        LabeledGraph::new_disconnected(self.n, edges).expect("simplification of a valid multigraph")
    }

    pub fn is_simple(&self) -> bool {
        self.adj.iter().all(|m| m.values().all(One::is_one))
    }
}

impl GraphView for LabeledMultigraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn neighbor_set(&self, v: usize) -> Vec<usize> {
        self.adj[v].keys().copied().collect()
    }

    fn is_leaf(&self, v: usize) -> bool {
        self.adj[v].len() == 1
    }
}

impl fmt::Debug for LabeledMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .into_iter()
            .map(|(a, b, m)| format!("({a},{b})^{m}"))
            .collect();
        write!(f, "LabeledMultigraph(n={}, edges=[{}])", self.n, edges.join(", "))
    }
}

/// One end of an [`IntegerInterval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    NegInfinity,
    Finite(i64),
    PosInfinity,
}

/// `[lo, hi]`, `[lo, ∞]` or all of ℤ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntegerInterval {
    lo: Endpoint,
    hi: Endpoint,
}

impl IntegerInterval {
    pub fn finite(lo: i64, hi: i64) -> Option<Self> {
        (lo <= hi).then_some(IntegerInterval {
            lo: Endpoint::Finite(lo),
            hi: Endpoint::Finite(hi),
        })
    }

    pub fn from(lo: i64) -> Self {
        IntegerInterval {
            lo: Endpoint::Finite(lo),
            hi: Endpoint::PosInfinity,
        }
    }

    pub fn integers() -> Self {
        IntegerInterval {
            lo: Endpoint::NegInfinity,
            hi: Endpoint::PosInfinity,
        }
    }

    pub fn lo(&self) -> Endpoint {
        self.lo
    }

    pub fn hi(&self) -> Endpoint {
        self.hi
    }

    pub fn contains(&self, x: i64) -> bool {
        let above = match self.lo {
            Endpoint::Finite(lo) => x >= lo,
            _ => true,
        };
        let below = match self.hi {
            Endpoint::Finite(hi) => x <= hi,
            _ => true,
        };
        above && below
    }

    pub fn is_finite(&self) -> bool {
        matches!((self.lo, self.hi), (Endpoint::Finite(_), Endpoint::Finite(_)))
    }

    /// Number of integers in a finite interval. Intervals are never empty.
    pub fn size(&self) -> Option<u64> {
        match (self.lo, self.hi) {
            (Endpoint::Finite(lo), Endpoint::Finite(hi)) => Some((hi - lo) as u64 + 1),
            _ => None,
        }
    }
}

impl fmt::Display for IntegerInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |e: Endpoint| match e {
            Endpoint::NegInfinity => "-inf".to_string(),
            Endpoint::PosInfinity => "inf".to_string(),
            Endpoint::Finite(x) => x.to_string(),
        };
        write!(f, "[{}, {}]", show(self.lo), show(self.hi))
    }
}
