//! JSON graph files.
//!
//! ```text
//! {"n": 5, "edges": [[0, 1], [1, 2], ...]}              simple graph
//! {"n": 5, "edges": [[0, 1, 3], [1, 2, 1], ...]}        weights or multiplicities
//! {"n": 5, "edges": [...], "labels": [-2, -1, ...]}     window of an infinite family
//! ```
//!
//! Weights too large for a `u64` are written as decimal strings.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::families::Window;
use crate::graph::{GraphError, LabeledGraph, LabeledMultigraph};
use crate::total::{TotalError, TotalLabeling};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("edge {index}: {why}")]
    Edge { index: usize, why: String },
    #[error("labels: expected {expected} entries, found {found}")]
    Labels { expected: usize, found: usize },
    #[error("the file carries weights other than 1; read it as a multigraph or total labeling")]
    Weighted,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Total(#[from] TotalError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    n: usize,
    edges: Vec<Vec<Value>>,
    #[serde(default)]
    labels: Option<Vec<i64>>,
}

/// A parsed graph file, not yet committed to a graph type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize, BigUint)>,
    pub labels: Option<Vec<i64>>,
}

fn parse_vertex(v: &Value, index: usize) -> Result<usize, IoError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| IoError::Edge {
        index,
        why: format!("`{v}` is not a vertex index"),
    })
}

fn parse_weight(v: &Value, index: usize) -> Result<BigUint, IoError> {
    let bad = || IoError::Edge {
        index,
        why: format!("`{v}` is not a positive integer weight"),
    };
    let w = match v {
        Value::Number(x) => x.as_u64().map(BigUint::from).ok_or_else(bad)?,
        Value::String(s) => s.parse::<BigUint>().map_err(|_| bad())?,
        _ => return Err(bad()),
    };
    if w == BigUint::from(0u8) {
        return Err(bad());
    }
    Ok(w)
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<GraphFile, IoError> {
        let raw: RawFile = serde_json::from_str(text)?;
        let mut edges = Vec::with_capacity(raw.edges.len());
        for (index, e) in raw.edges.iter().enumerate() {
            let (a, b, w) = match e.as_slice() {
                [a, b] => (a, b, BigUint::one()),
                [a, b, w] => (a, b, parse_weight(w, index)?),
                _ => {
                    return Err(IoError::Edge {
                        index,
                        why: format!("expected [a, b] or [a, b, weight], found {} entries", e.len()),
                    })
                }
            };
            edges.push((parse_vertex(a, index)?, parse_vertex(b, index)?, w));
        }
        if let Some(labels) = &raw.labels {
            if labels.len() != raw.n {
                return Err(IoError::Labels {
                    expected: raw.n,
                    found: labels.len(),
                });
            }
        }
        Ok(GraphFile {
            n: raw.n,
            edges,
            labels: raw.labels,
        })
    }

    pub fn is_weighted(&self) -> bool {
        self.edges.iter().any(|(_, _, w)| !w.is_one())
    }

    /// The simple graph; rejected when a weight differs from 1.
    pub fn simple(&self) -> Result<LabeledGraph, IoError> {
        if self.is_weighted() {
            return Err(IoError::Weighted);
        }
        Ok(LabeledGraph::new_disconnected(
            self.n,
            self.edges.iter().map(|&(a, b, _)| (a, b)),
        )?)
    }

    pub fn multigraph(&self) -> Result<LabeledMultigraph, IoError> {
        Ok(LabeledMultigraph::new_disconnected(self.n, self.edges.iter().cloned())?)
    }

    pub fn total(&self) -> Result<TotalLabeling, IoError> {
        let graph = LabeledGraph::new_disconnected(self.n, self.edges.iter().map(|&(a, b, _)| (a, b)))?;
        let weights: BTreeMap<(usize, usize), BigUint> = self
            .edges
            .iter()
            .map(|(a, b, w)| (((*a).min(*b), (*a).max(*b)), w.clone()))
            .collect();
        Ok(TotalLabeling::new(graph, weights)?)
    }
}

fn weight_value(w: &BigUint) -> Value {
    match w.to_u64() {
        Some(x) => json!(x),
        None => json!(w.to_string()),
    }
}

fn finish(v: Value) -> String {
    let mut s = serde_json::to_string(&v).expect("plain values");
    s.push('\n');
    s
}

pub fn graph_to_json(g: &LabeledGraph) -> String {
    let edges: Vec<[usize; 2]> = g.edges().into_iter().map(|(a, b)| [a, b]).collect();
    finish(json!({"n": g.n(), "edges": edges}))
}

pub fn multigraph_to_json(g: &LabeledMultigraph) -> String {
    let edges: Vec<Value> = g
        .edges()
        .into_iter()
        .map(|(a, b, m)| json!([a, b, weight_value(&m)]))
        .collect();
    finish(json!({"n": g.n(), "edges": edges}))
}

pub fn total_to_json(t: &TotalLabeling) -> String {
    let edges: Vec<Value> = t
        .weights()
        .iter()
        .map(|(&(a, b), w)| json!([a, b, weight_value(w)]))
        .collect();
    finish(json!({"n": t.graph().n(), "edges": edges}))
}

/// Window JSON; `labels[i]` is the original label of vertex `i`.
pub fn window_to_json(w: &Window) -> String {
    let edges: Vec<[usize; 2]> = w.graph.edges().into_iter().map(|(a, b)| [a, b]).collect();
    finish(json!({"n": w.graph.n(), "edges": edges, "labels": w.labels}))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_round_trip() {
        let g = LabeledGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let text = graph_to_json(&g);
        assert_eq!(text, "{\"edges\":[[0,1],[1,2],[2,3]],\"n\":4}\n");
        let back = GraphFile::parse(&text).unwrap().simple().unwrap();
        assert!(back.labeled_equal(&g));
    }

    #[test]
    fn weights_and_big_values() {
        let big: BigUint = "123456789012345678901234567890".parse().unwrap();
        let m = LabeledMultigraph::new(3, [(0, 1, big.clone()), (1, 2, big.clone())]).unwrap();
        let text = multigraph_to_json(&m);
        assert!(text.contains("\"123456789012345678901234567890\""));
        let file = GraphFile::parse(&text).unwrap();
        assert!(file.is_weighted());
        assert!(matches!(file.simple(), Err(IoError::Weighted)));
        assert!(file.multigraph().unwrap().labeled_equal(&m));
        assert_eq!(file.total().unwrap().weight(1, 0), Some(&big));
    }

    #[test]
    fn errors_point_at_the_problem() {
        assert!(matches!(GraphFile::parse("{\"n\": 3"), Err(IoError::Json(_))));
        assert!(matches!(
            GraphFile::parse("{\"n\": 3, \"edges\": [[0, 1], [1]]}"),
            Err(IoError::Edge { index: 1, .. })
        ));
        assert!(matches!(
            GraphFile::parse("{\"n\": 3, \"edges\": [[0, 1, 0]]}"),
            Err(IoError::Edge { index: 0, .. })
        ));
        assert!(matches!(
            GraphFile::parse("{\"n\": 3, \"edges\": [[0, -1]]}"),
            Err(IoError::Edge { index: 0, .. })
        ));
        assert!(matches!(
            GraphFile::parse("{\"n\": 3, \"edges\": [], \"labels\": [1]}"),
            Err(IoError::Labels { expected: 3, found: 1 })
        ));
        let bad_vertex = GraphFile::parse("{\"n\": 3, \"edges\": [[0, 5]]}").unwrap();
        assert!(matches!(bad_vertex.simple(), Err(IoError::Graph(_))));
    }
}
