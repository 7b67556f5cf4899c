//! Total labelings: positive edge weights that make the identity vertex
//! labeling balance at every non-leaf.
//!
//! [`total_label`] visits non-leaves in increasing label order. At each one
//! it harmonizes the weighted closed neighborhood, scaling the edges to
//! smaller neighbors by one factor and the edges to larger neighbors by
//! another. Edges to smaller non-leaves belong to vertices whose balance is
//! already settled, so instead of touching that single edge the whole
//! settled component containing the neighbor is rescaled. Uniform scaling
//! keeps every settled balance intact, which makes the pass terminate after
//! one visit per vertex.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphView, LabeledGraph, LabeledMultigraph};
use crate::harmonic::{harmonize_multiset, verify_total, HarmonicError, Multiset, VerifyReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TotalError {
    #[error("vertices {0:?} are not strictly between their smallest and largest neighbors")]
    NotAdmissible(Vec<usize>),
    #[error("result fails its own balance check at vertices {0:?}")]
    Unbalanced(Vec<usize>),
    #[error(transparent)]
    Weights(#[from] HarmonicError),
}

/// A simple graph with a positive integer weight on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalLabeling {
    graph: LabeledGraph,
    weights: BTreeMap<(usize, usize), BigUint>,
}

impl TotalLabeling {
    /// Weights are keyed by `(a, b)` with `a < b`; every edge needs one.
    pub fn new(graph: LabeledGraph, weights: BTreeMap<(usize, usize), BigUint>) -> Result<Self, TotalError> {
        for (&(a, b), w) in &weights {
            if a >= b || !graph.has_edge(a, b) {
                return Err(HarmonicError::UnknownEdge(a, b).into());
            }
            if w.is_zero() {
                return Err(HarmonicError::NonPositiveWeight(a, b, BigInt::zero()).into());
            }
        }
        if let Some((a, b)) = graph.edges().into_iter().find(|e| !weights.contains_key(e)) {
            return Err(HarmonicError::MissingWeight(a, b).into());
        }
        Ok(TotalLabeling { graph, weights })
    }

    pub fn all_ones(graph: LabeledGraph) -> Self {
        let weights = graph.edges().into_iter().map(|e| (e, BigUint::one())).collect();
        TotalLabeling { graph, weights }
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn weights(&self) -> &BTreeMap<(usize, usize), BigUint> {
        &self.weights
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<&BigUint> {
        self.weights.get(&(a.min(b), a.max(b)))
    }

    pub fn verify(&self) -> VerifyReport {
        let signed = self
            .weights
            .iter()
            .map(|(&e, w)| (e, BigInt::from(w.clone())))
            .collect();
        verify_total(&self.graph, &signed).expect("weights validated on construction")
    }

    /// The multigraph whose edge multiplicities are the weights.
    pub fn to_multigraph(&self) -> LabeledMultigraph {
        let edges = self.weights.iter().map(|(&(a, b), w)| (a, b, w.clone()));
        LabeledMultigraph::new_disconnected(self.graph.n(), edges).expect("same vertex set")
    }

    pub fn from_multigraph(g: &LabeledMultigraph) -> Self {
        let graph = g.simplification();
        let weights = g.edges().into_iter().map(|(a, b, m)| ((a, b), m)).collect();
        TotalLabeling { graph, weights }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    /// Non-leaves that are not strictly inside the range of their neighbors.
    pub failing: Vec<usize>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.failing.is_empty()
    }
}

/// Every non-leaf must have a smaller and a larger neighbor. Isolated
/// vertices have nothing to balance and are accepted.
pub fn check_admissible(g: &LabeledGraph) -> AdmissibilityReport {
    let failing = (0..g.n())
        .filter(|&v| {
            let nb = g.neighbors(v);
            nb.len() >= 2 && !(nb[0] < v && v < nb[nb.len() - 1])
        })
        .collect();
    AdmissibilityReport { failing }
}

struct Components {
    parent: Vec<usize>,
}

impl Components {
    fn new(n: usize) -> Self {
        Components {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = v;
        while self.parent[cur] != root {
            cur = std::mem::replace(&mut self.parent[cur], root);
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Computes positive weights that balance every non-leaf of an admissible
/// graph. Deterministic; the result is verified before it is returned.
pub fn total_label(g: &LabeledGraph) -> Result<TotalLabeling, TotalError> {
    let admissible = check_admissible(g);
    if !admissible.is_admissible() {
        return Err(TotalError::NotAdmissible(admissible.failing));
    }
    let n = g.n();
    let mut weights: BTreeMap<(usize, usize), BigUint> = g.edges().into_iter().map(|e| (e, BigUint::one())).collect();
    let mut settled = vec![false; n];
    let mut comps = Components::new(n);

    for v in (0..n).filter(|&v| g.degree(v) >= 2) {
        let mut hood = Multiset::new();
        hood.insert(v as i64, BigUint::one())?;
        for &u in g.neighbors(v) {
            hood.insert(u as i64, weights[&key(u, v)].clone())?;
        }
        let balanced = harmonize_multiset(&hood, v as i64)?;
        let ratio = |u: usize| balanced.multiset().multiplicity(u as i64) / &weights[&key(u, v)];
        let below = ratio(g.neighbors(v)[0]);
        let above = ratio(*g.neighbors(v).last().expect("non-leaf"));
        let common = below.gcd(&above);
        let (below, above) = (below / &common, above / &common);

        let mut rescale: Vec<usize> = Vec::new();
        for &u in g.neighbors(v) {
            if u > v {
                *weights.get_mut(&key(u, v)).expect("edge") *= &above;
            } else if settled[u] {
                rescale.push(comps.find(u));
            } else {
                *weights.get_mut(&key(u, v)).expect("edge") *= &below;
            }
        }
        rescale.sort_unstable();
        rescale.dedup();
        if !below.is_one() && !rescale.is_empty() {
            let members: Vec<usize> = (0..n)
                .filter(|&t| settled[t] && rescale.contains(&comps.find(t)))
                .collect();
            let mut touched: Vec<(usize, usize)> = members
                .iter()
                .flat_map(|&t| g.neighbors(t).iter().map(move |&w| key(t, w)))
                .collect();
            touched.sort_unstable();
            touched.dedup();
            for e in touched {
                *weights.get_mut(&e).expect("edge") *= &below;
            }
        }
        for root in rescale {
            comps.union(root, v);
        }
        settled[v] = true;
    }

    let t = TotalLabeling {
        graph: g.clone(),
        weights,
    };
    let report = t.verify();
    if !report.is_verified() {
        return Err(TotalError::Unbalanced(report.failures().map(|b| b.vertex).collect()));
    }
    Ok(t)
}

/// Divides the weights of each group of edges tied together through
/// non-leaves by their gcd, keeping the division only when the result
/// still balances.
pub fn minimize_weights(t: &TotalLabeling) -> TotalLabeling {
    let g = &t.graph;
    let edges: Vec<(usize, usize)> = t.weights.keys().copied().collect();
    let index: BTreeMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut comps = Components::new(edges.len());
    for v in (0..g.n()).filter(|&v| !g.is_leaf(v)) {
        let incident: Vec<usize> = g.neighbors(v).iter().map(|&u| index[&key(u, v)]).collect();
        for pair in incident.windows(2) {
            comps.union(pair[0], pair[1]);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..edges.len() {
        groups.entry(comps.find(i)).or_default().push(i);
    }

    let mut current = t.clone();
    for members in groups.values() {
        let divisor = members
            .iter()
            .fold(BigUint::zero(), |acc, &i| acc.gcd(&current.weights[&edges[i]]));
        if divisor <= BigUint::one() {
            continue;
        }
        let mut candidate = current.clone();
        for &i in members {
            let w = candidate.weights.get_mut(&edges[i]).expect("edge");
            *w = &*w / &divisor;
        }
        if candidate.verify().is_verified() {
            current = candidate;
        }
    }
    current
}
