//! Averages, harmonic (multi)sets of integers and the labeling verifiers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{GraphView, LabeledGraph, LabeledMultigraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarmonicError {
    #[error("average of an empty multiset")]
    Empty,
    #[error("multiplicity of {0} is zero")]
    ZeroMultiplicity(i64),
    #[error("{0} is not harmonic")]
    NotHarmonic(String),
    #[error("{x} is not an element of {set}")]
    NotAnElement { x: i64, set: String },
    #[error("{x} is an extreme element of {set}; it cannot become the average")]
    Extreme { x: i64, set: String },
    #[error("edge ({0}, {1}) has non-positive weight {2}")]
    NonPositiveWeight(usize, usize, BigInt),
    #[error("edge ({0}, {1}) has no weight")]
    MissingWeight(usize, usize),
    #[error("weight given for ({0}, {1}), which is not an edge")]
    UnknownEdge(usize, usize),
}

/// A finite non-empty multiset of integers with positive multiplicities.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Multiset {
    entries: BTreeMap<i64, BigUint>,
}

impl Multiset {
    pub fn new() -> Self {
        Multiset::default()
    }

    /// Every element with multiplicity one.
    pub fn from_set<I: IntoIterator<Item = i64>>(elems: I) -> Self {
        let mut m = Multiset::new();
        for x in elems {
            m.entries.insert(x, BigUint::one());
        }
        m
    }

    /// Repeated elements accumulate.
    pub fn from_pairs<I, M>(pairs: I) -> Result<Self, HarmonicError>
    where
        I: IntoIterator<Item = (i64, M)>,
        M: Into<BigUint>,
    {
        let mut m = Multiset::new();
        for (x, k) in pairs {
            m.insert(x, k.into())?;
        }
        Ok(m)
    }

    pub fn insert(&mut self, x: i64, k: BigUint) -> Result<(), HarmonicError> {
        if k.is_zero() {
            return Err(HarmonicError::ZeroMultiplicity(x));
        }
        *self.entries.entry(x).or_default() += k;
        Ok(())
    }

    pub fn multiplicity(&self, x: i64) -> BigUint {
        self.entries.get(&x).cloned().unwrap_or_default()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.entries.contains_key(&x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigUint)> + '_ {
        self.entries.iter().map(|(&x, k)| (x, k))
    }

    /// The underlying set, ascending.
    pub fn elements(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn underlying(&self) -> BTreeSet<i64> {
        self.entries.keys().copied().collect()
    }

    pub fn distinct_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `|M|`, the sum of multiplicities.
    pub fn cardinality(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn min(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    /// True when every multiplicity is one.
    pub fn is_set(&self) -> bool {
        self.entries.values().all(One::is_one)
    }

    /// Multiplies every multiplicity by `c`; `c` must be positive.
    pub fn scaled(&self, c: &BigUint) -> Multiset {
        assert!(!c.is_zero(), "scaling factor must be positive");
        Multiset {
            entries: self.entries.iter().map(|(&x, k)| (x, k * c)).collect(),
        }
    }

    /// Elements shifted by `d`.
    pub fn translated(&self, d: i64) -> Multiset {
        Multiset {
            entries: self.entries.iter().map(|(&x, k)| (x + d, k.clone())).collect(),
        }
    }

    /// Elements mapped by `x -> top - x`.
    pub fn reflected(&self, top: i64) -> Multiset {
        Multiset {
            entries: self.entries.iter().map(|(&x, k)| (top - x, k.clone())).collect(),
        }
    }

    /// Exact weighted average.
    pub fn average(&self) -> Result<BigRational, HarmonicError> {
        if self.entries.is_empty() {
            return Err(HarmonicError::Empty);
        }
        let mut total = BigInt::zero();
        for (&x, k) in &self.entries {
            total += BigInt::from(x) * BigInt::from(k.clone());
        }
        Ok(BigRational::new(total, BigInt::from(self.cardinality())))
    }

    /// The average when it is an integer belonging to the set.
    pub fn harmonic_average(&self) -> Option<i64> {
        let avg = self.average().ok()?;
        if !avg.is_integer() {
            return None;
        }
        let a = avg.to_integer().to_i64()?;
        self.contains(a).then_some(a)
    }

    pub fn is_harmonic(&self) -> bool {
        self.harmonic_average().is_some()
    }

    pub fn is_nontrivial_harmonic(&self) -> bool {
        self.distinct_len() >= 3 && self.is_harmonic()
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, k) in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            if k.is_one() {
                write!(f, "{x}")?;
            } else {
                write!(f, "{x}^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// Exact average of a finite multiset of integers given as a sequence
/// (repeats count).
pub fn av<I: IntoIterator<Item = i64>>(elems: I) -> Result<BigRational, HarmonicError> {
    let mut total = BigInt::zero();
    let mut count = 0u64;
    for x in elems {
        total += x;
        count += 1;
    }
    if count == 0 {
        return Err(HarmonicError::Empty);
    }
    Ok(BigRational::new(total, BigInt::from(count)))
}

/// A finite set of integers containing its own average.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HarmonicSet {
    elems: BTreeSet<i64>,
    average: i64,
}

impl HarmonicSet {
    pub fn new<I: IntoIterator<Item = i64>>(elems: I) -> Result<Self, HarmonicError> {
        let elems: BTreeSet<i64> = elems.into_iter().collect();
        let m = Multiset::from_set(elems.iter().copied());
        if m.is_empty() {
            return Err(HarmonicError::Empty);
        }
        let average = m
            .harmonic_average()
            .ok_or_else(|| HarmonicError::NotHarmonic(m.to_string()))?;
        Ok(HarmonicSet { elems, average })
    }

    pub fn average(&self) -> i64 {
        self.average
    }

    pub fn elements(&self) -> &BTreeSet<i64> {
        &self.elems
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() < 3
    }
}

impl fmt::Debug for HarmonicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", Multiset::from_set(self.elems.iter().copied()))
    }
}

/// A multiset containing its own weighted average.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HarmonicMultiset {
    inner: Multiset,
    average: i64,
}

impl HarmonicMultiset {
    pub fn new(inner: Multiset) -> Result<Self, HarmonicError> {
        if inner.is_empty() {
            return Err(HarmonicError::Empty);
        }
        let average = inner
            .harmonic_average()
            .ok_or_else(|| HarmonicError::NotHarmonic(inner.to_string()))?;
        Ok(HarmonicMultiset { inner, average })
    }

    pub fn average(&self) -> i64 {
        self.average
    }

    pub fn multiset(&self) -> &Multiset {
        &self.inner
    }

    pub fn into_multiset(self) -> Multiset {
        self.inner
    }

    pub fn is_trivial(&self) -> bool {
        self.inner.distinct_len() < 3
    }
}

/// Re-weights `m` so that its weighted average is `x`, keeping the
/// underlying set.
///
/// With `P = Σ_{z<x} (x-z)·m(z)` and `N = Σ_{z>x} (z-x)·m(z)`, elements
/// below `x` are scaled by `N` and elements above by `P`; `m(x)` is kept.
pub fn harmonize_multiset(m: &Multiset, x: i64) -> Result<HarmonicMultiset, HarmonicError> {
    if !m.contains(x) {
        return Err(HarmonicError::NotAnElement { x, set: m.to_string() });
    }
    if m.min() == Some(x) || m.max() == Some(x) {
        return Err(HarmonicError::Extreme { x, set: m.to_string() });
    }
    let mut below = BigUint::zero();
    let mut above = BigUint::zero();
    for (z, k) in m.iter() {
        if z < x {
            below += BigUint::from(x.abs_diff(z)) * k;
        } else if z > x {
            above += BigUint::from(z.abs_diff(x)) * k;
        }
    }
    let mut out = Multiset::new();
    for (z, k) in m.iter() {
        let scaled = match z.cmp(&x) {
            std::cmp::Ordering::Less => k * &above,
            std::cmp::Ordering::Greater => k * &below,
            std::cmp::Ordering::Equal => k.clone(),
        };
        out.insert(z, scaled)?;
    }
    HarmonicMultiset::new(out)
}

fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

/// The balance `Σ_w m(v,w)·w` against `deg(v)·v` at one non-leaf vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexBalance {
    pub vertex: usize,
    #[serde(serialize_with = "serialize_bigint")]
    pub lhs: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub rhs: BigInt,
}

impl VertexBalance {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    /// `lhs - rhs`; zero exactly when the vertex is harmonic.
    pub fn deficit(&self) -> BigInt {
        &self.lhs - &self.rhs
    }
}

/// Per-vertex outcome of a harmonicity check; one entry per non-leaf.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct VerifyReport {
    pub vertices: Vec<VertexBalance>,
}

impl VerifyReport {
    pub fn is_verified(&self) -> bool {
        self.vertices.iter().all(VertexBalance::holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VertexBalance> + '_ {
        self.vertices.iter().filter(|b| !b.holds())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let failures: Vec<&VertexBalance> = self.failures().collect();
        serde_json::json!({
            "verified": self.is_verified(),
            "vertices": self.vertices,
            "failures": failures,
        })
    }
}

/// Checks `Σ_{w~v} w = deg(v)·v` at every non-leaf of `g`.
pub fn verify_weak(g: &LabeledGraph) -> VerifyReport {
    let mut vertices = Vec::new();
    for v in 0..g.n() {
        if g.is_leaf(v) {
            continue;
        }
        let lhs: i128 = g.neighbors(v).iter().map(|&w| w as i128).sum();
        let rhs = g.degree(v) as i128 * v as i128;
        vertices.push(VertexBalance {
            vertex: v,
            lhs: lhs.into(),
            rhs: rhs.into(),
        });
    }
    VerifyReport { vertices }
}

/// Multiplicity-weighted version of [`verify_weak`].
pub fn verify_weak_multi(g: &LabeledMultigraph) -> VerifyReport {
    let mut vertices = Vec::new();
    for v in 0..g.n() {
        if g.is_leaf(v) {
            continue;
        }
        let mut lhs = BigInt::zero();
        for (w, m) in g.neighbors(v) {
            lhs += BigInt::from(m.clone()) * BigInt::from(w);
        }
        let rhs = BigInt::from(g.degree(v)) * BigInt::from(v);
        vertices.push(VertexBalance { vertex: v, lhs, rhs });
    }
    VerifyReport { vertices }
}

/// Verifies a total labeling given as edge weights over `graph`.
///
/// Weights must cover exactly the edge set and be positive.
pub fn verify_total(
    graph: &LabeledGraph,
    weights: &BTreeMap<(usize, usize), BigInt>,
) -> Result<VerifyReport, HarmonicError> {
    for (&(a, b), w) in weights {
        if !graph.has_edge(a, b) || a > b {
            return Err(HarmonicError::UnknownEdge(a, b));
        }
        if !w.is_positive() {
            return Err(HarmonicError::NonPositiveWeight(a, b, w.clone()));
        }
    }
    let mut multi_edges = Vec::with_capacity(weights.len());
    for (a, b) in graph.edges() {
        let w = weights.get(&(a, b)).ok_or(HarmonicError::MissingWeight(a, b))?;
        let w = w.to_biguint().expect("checked positive");
        multi_edges.push((a, b, w));
    }
    let multi = LabeledMultigraph::new_disconnected(graph.n(), multi_edges).expect("weights over a valid simple graph");
    Ok(verify_weak_multi(&multi))
}

/// Independent check through the reduced Laplacian: deletes the leaf rows
/// of `D - A` and tests whether `(0, 1, ..., n-1)` lies in its kernel.
pub fn laplacian_kernel_check(g: &LabeledGraph) -> bool {
    let n = g.n();
    let mut laplacian = vec![vec![0i64; n]; n];
    for (a, b) in g.edges() {
        laplacian[a][b] -= 1;
        laplacian[b][a] -= 1;
        laplacian[a][a] += 1;
        laplacian[b][b] += 1;
    }
    let leaves: BTreeSet<usize> = g.leaves().into_iter().collect();
    laplacian
        .iter()
        .enumerate()
        .filter(|(row, _)| !leaves.contains(row))
        .all(|(_, row)| {
            let dot: i128 = row
                .iter()
                .enumerate()
                .map(|(col, &entry)| entry as i128 * col as i128)
                .sum();
            dot == 0
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ratio(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> LabeledGraph {
        LabeledGraph::new(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn averages() {
        assert_eq!(av([0, 1, 2]).unwrap(), ratio(1, 1));
        assert_eq!(av([0, 1]).unwrap(), ratio(1, 2));
        assert_eq!(av(std::iter::empty()), Err(HarmonicError::Empty));
        let m = Multiset::from_pairs([(0, 6u32), (1, 1), (2, 1), (3, 1), (4, 1)]).unwrap();
        assert_eq!(m.average().unwrap(), ratio(1, 1));
        assert_eq!(Multiset::new().average(), Err(HarmonicError::Empty));
    }

    #[test]
    fn harmonic_sets() {
        let unit = Multiset::from_set([5]);
        assert!(unit.is_harmonic());
        assert!(!unit.is_nontrivial_harmonic());
        assert!(Multiset::from_set([3, 5, 7]).is_nontrivial_harmonic());
        assert!(Multiset::from_set([0, 2, 3, 4, 6]).is_nontrivial_harmonic());
        assert_eq!(HarmonicSet::new([0, 2, 3, 4, 6]).unwrap().average(), 3);
        assert!(HarmonicSet::new([2, 4, 5, 6]).is_err());
        assert!(HarmonicSet::new([5]).unwrap().is_trivial());
    }

    #[test]
    fn no_two_element_set_is_harmonic() {
        for a in -20..=20 {
            for b in (a + 1)..=20 {
                assert!(!Multiset::from_set([a, b]).is_harmonic(), "{{{a},{b}}}");
            }
        }
    }

    #[test]
    fn verify_weak_examples() {
        let p5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert!(verify_weak(&p5).is_verified());
        let star = graph(5, &[(0, 2), (1, 2), (2, 3), (2, 4)]);
        assert!(verify_weak(&star).is_verified());
        // center 1 with leaves 0, 2, 3: 0+2+3 = 5 != 3
        let bad = graph(4, &[(0, 1), (1, 2), (1, 3)]);
        let report = verify_weak(&bad);
        assert!(!report.is_verified());
        let fail: Vec<_> = report.failures().collect();
        assert_eq!(fail.len(), 1);
        assert_eq!(fail[0].vertex, 1);
        assert_eq!(fail[0].lhs, BigInt::from(5));
        assert_eq!(fail[0].rhs, BigInt::from(3));
        assert_eq!(fail[0].deficit(), BigInt::from(2));
    }

    #[test]
    fn report_json_shape() {
        let bad = graph(4, &[(0, 1), (1, 2), (1, 3)]);
        let json = verify_weak(&bad).to_json();
        assert_eq!(json["verified"], false);
        assert_eq!(
            json["failures"][0],
            serde_json::json!({"vertex": 1, "lhs": 5, "rhs": 3})
        );
    }

    fn heavy_edge_star(m01: u32) -> LabeledMultigraph {
        LabeledMultigraph::new(5, [(0, 1, m01), (1, 2, 1), (1, 3, 1), (1, 4, 1)]).unwrap()
    }

    #[test]
    fn verify_multigraph_examples() {
        assert!(verify_weak_multi(&heavy_edge_star(6)).is_verified());
        let report = verify_weak_multi(&heavy_edge_star(5));
        assert!(!report.is_verified());
        let fail: Vec<_> = report.failures().collect();
        assert_eq!((fail[0].lhs.clone(), fail[0].rhs.clone()), (9.into(), 8.into()));
    }

    fn weights(pairs: &[((usize, usize), i64)]) -> BTreeMap<(usize, usize), BigInt> {
        pairs.iter().map(|&(e, w)| (e, BigInt::from(w))).collect()
    }

    #[test]
    fn verify_total_triangle_with_tails() {
        let g = graph(5, &[(0, 1), (1, 2), (1, 3), (2, 3), (3, 4)]);
        let w = weights(&[((0, 1), 3), ((1, 2), 1), ((1, 3), 1), ((2, 3), 1), ((3, 4), 3)]);
        assert!(verify_total(&g, &w).unwrap().is_verified());
        let ones = weights(&[((0, 1), 1), ((1, 2), 1), ((1, 3), 1), ((2, 3), 1), ((3, 4), 1)]);
        assert!(!verify_total(&g, &ones).unwrap().is_verified());
    }

    #[test]
    fn verify_total_rejects_bad_weights() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        assert!(matches!(
            verify_total(&g, &weights(&[((0, 1), 0), ((1, 2), 1)])),
            Err(HarmonicError::NonPositiveWeight(0, 1, _))
        ));
        assert!(matches!(
            verify_total(&g, &weights(&[((0, 1), -2), ((1, 2), 1)])),
            Err(HarmonicError::NonPositiveWeight(0, 1, _))
        ));
        assert_eq!(
            verify_total(&g, &weights(&[((0, 1), 1)])),
            Err(HarmonicError::MissingWeight(1, 2))
        );
        assert_eq!(
            verify_total(&g, &weights(&[((0, 1), 1), ((1, 2), 1), ((0, 2), 1)])),
            Err(HarmonicError::UnknownEdge(0, 2))
        );
        let all_ones = weights(&[((0, 1), 1), ((1, 2), 1)]);
        assert!(verify_total(&g, &all_ones).unwrap().is_verified());
    }

    #[test]
    fn laplacian_examples() {
        assert!(laplacian_kernel_check(&graph(4, &[(0, 1), (1, 2), (2, 3)])));
        assert!(laplacian_kernel_check(&graph(5, &[(0, 2), (1, 2), (2, 3), (2, 4)])));
        assert!(!laplacian_kernel_check(&graph(4, &[(0, 1), (1, 2), (1, 3)])));
    }

    #[test]
    fn six_cycle_has_no_weak_labeling() {
        // Every bijection onto [0,5] is a relabeling of the cycle 0-1-2-3-4-5.
        let mut perm: Vec<usize> = (0..6).collect();
        let mut count = 0;
        permutohedron_heap(&mut perm, &mut |p| {
            let edges: Vec<_> = (0..6).map(|i| (p[i], p[(i + 1) % 6])).collect();
            let g = LabeledGraph::new(6, edges).unwrap();
            assert!(!laplacian_kernel_check(&g));
            assert!(!verify_weak(&g).is_verified());
            count += 1;
        });
        assert_eq!(count, 720);
    }

    fn permutohedron_heap(items: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        fn rec(k: usize, items: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
            if k == 1 {
                visit(items);
                return;
            }
            for i in 0..k {
                rec(k - 1, items, visit);
                let j = if k.is_multiple_of(2) { i } else { 0 };
                items.swap(j, k - 1);
            }
        }
        let k = items.len();
        rec(k, items, visit);
    }

    #[test]
    fn harmonize_examples() {
        let m = Multiset::from_set([0, 5, 6, 10]);
        let h = harmonize_multiset(&m, 6).unwrap();
        assert_eq!(h.average(), 6);
        assert_eq!(h.multiset().underlying(), m.underlying());
        assert_eq!(h.multiset().average().unwrap(), ratio(6, 1));

        let already = harmonize_multiset(&Multiset::from_set([0, 1, 2]), 1).unwrap();
        assert_eq!(already.multiset(), &Multiset::from_set([0, 1, 2]));

        // The instance where rescaling only the minimum fails.
        let h = harmonize_multiset(&Multiset::from_set([0, 10, 11, 12, 13]), 12).unwrap();
        assert_eq!(h.average(), 12);

        let h = harmonize_multiset(&Multiset::from_set([0, 3, 4, 5]), 4).unwrap();
        assert_eq!(h.average(), 4);
        assert!(h.multiset().iter().all(|(_, k)| !k.is_zero()));
    }

    #[test]
    fn harmonize_rejects_extremes() {
        let m = Multiset::from_set([0, 5, 6, 10]);
        assert!(matches!(harmonize_multiset(&m, 0), Err(HarmonicError::Extreme { .. })));
        assert!(matches!(harmonize_multiset(&m, 10), Err(HarmonicError::Extreme { .. })));
        assert!(matches!(
            harmonize_multiset(&m, 7),
            Err(HarmonicError::NotAnElement { .. })
        ));
    }

    proptest! {
        #[test]
        fn harmonize_hits_target(
            raw in proptest::collection::btree_map(-50i64..50, 1u32..6, 3..9),
            pick in any::<prop::sample::Index>(),
        ) {
            let m = Multiset::from_pairs(raw.iter().map(|(&x, &k)| (x, k))).unwrap();
            let interior: Vec<i64> = m.elements().skip(1).take(m.distinct_len() - 2).collect();
            let x = interior[pick.index(interior.len())];
            let h = harmonize_multiset(&m, x).unwrap();
            prop_assert_eq!(h.average(), x);
            prop_assert_eq!(h.multiset().underlying(), m.underlying());
        }

        #[test]
        fn scaling_preserves_average(
            raw in proptest::collection::btree_map(-50i64..50, 1u32..6, 1..9),
            c in 1u32..20,
        ) {
            let m = Multiset::from_pairs(raw.iter().map(|(&x, &k)| (x, k))).unwrap();
            prop_assert_eq!(m.scaled(&BigUint::from(c)).average().unwrap(), m.average().unwrap());
        }
    }
}
