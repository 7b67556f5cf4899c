//! The bijection between weakly labeled graphs and collections of harmonic
//! subsets (or multisets) of the integers.
//!
//! [`extract_graph`] sends a labeled graph to the closed neighborhoods of its
//! non-leaves; [`build_graph`] rebuilds the graph from a collection that
//! satisfies the structural axioms checked by [`check_axioms`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, GraphView, LabeledGraph, LabeledMultigraph};
use crate::harmonic::{verify_weak, verify_weak_multi, Multiset, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Simple,
    Multi,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorrespondenceError {
    #[error("labeling is not weakly harmonic at vertices {0:?}")]
    NotVerified(Vec<usize>),
    #[error("collection violates its axioms:\n{0}")]
    Axioms(Box<AxiomReport>),
    #[error("a set in simple mode carries multiplicities: {0}")]
    MultiplicityInSimpleMode(String),
    #[error("empty set in collection")]
    EmptySet,
    #[error("multiplicity of edge ({0}, {1}) disagrees between its endpoints")]
    InconsistentMultiplicity(i64, i64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A finite collection of (multi)sets of integers, kept in canonical order:
/// by average, then by contents.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HarmonicCollection {
    mode: Mode,
    sets: Vec<Multiset>,
}

fn canonical_key(m: &Multiset) -> (Option<BigRational>, Multiset) {
    (m.average().ok(), m.clone())
}

impl HarmonicCollection {
    pub fn new(mode: Mode, mut sets: Vec<Multiset>) -> Result<Self, CorrespondenceError> {
        for s in &sets {
            if s.is_empty() {
                return Err(CorrespondenceError::EmptySet);
            }
            if mode == Mode::Simple && !s.is_set() {
                return Err(CorrespondenceError::MultiplicityInSimpleMode(s.to_string()));
            }
        }
        sets.sort_by_cached_key(canonical_key);
        Ok(HarmonicCollection { mode, sets })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn sets(&self) -> &[Multiset] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn union(&self) -> BTreeSet<i64> {
        self.sets.iter().flat_map(Multiset::elements).collect()
    }

    /// Integer averages of the members that have one.
    pub fn averages(&self) -> Vec<Option<i64>> {
        self.sets.iter().map(integer_average).collect()
    }

    /// Image under `x -> top - x`, re-canonicalized.
    pub fn reflect(&self, top: i64) -> HarmonicCollection {
        let sets = self.sets.iter().map(|s| s.reflected(top)).collect();
        HarmonicCollection::new(self.mode, sets).expect("reflection keeps validity")
    }

    /// Image under `x -> x + d`.
    pub fn translate(&self, d: i64) -> HarmonicCollection {
        let sets = self.sets.iter().map(|s| s.translated(d)).collect();
        HarmonicCollection::new(self.mode, sets).expect("translation keeps validity")
    }

    /// Same sets, other mode. Fails when going to simple mode with
    /// multiplicities present.
    pub fn with_mode(&self, mode: Mode) -> Result<HarmonicCollection, CorrespondenceError> {
        HarmonicCollection::new(mode, self.sets.clone())
    }
}

impl fmt::Display for HarmonicCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sets.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HarmonicCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

fn integer_average(m: &Multiset) -> Option<i64> {
    let avg = m.average().ok()?;
    avg.is_integer().then(|| avg.to_integer().to_i64()).flatten()
}

/// Result of one axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail(String),
    Skipped,
}

impl Outcome {
    pub fn is_ok(&self) -> bool {
        !matches!(self, Outcome::Fail(_))
    }

    fn from_failures(failures: Vec<String>) -> Outcome {
        if failures.is_empty() {
            Outcome::Pass
        } else {
            Outcome::Fail(failures.join("; "))
        }
    }
}

/// Per-axiom outcome. `members` covers non-trivial harmonicity of every
/// set (and, in multi mode, that each average occurs once in its own set).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub mode: Mode,
    pub members: Outcome,
    pub p1: Outcome,
    pub p2: Outcome,
    pub p3: Outcome,
    pub p4: Outcome,
    pub p5: Outcome,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.outcomes().iter().all(|(_, o)| o.is_ok())
    }

    pub fn outcomes(&self) -> [(String, &Outcome); 6] {
        let prefix = match self.mode {
            Mode::Simple => "P",
            Mode::Multi => "MP",
        };
        [
            ("members".to_string(), &self.members),
            (format!("{prefix}1"), &self.p1),
            (format!("{prefix}2"), &self.p2),
            (format!("{prefix}3"), &self.p3),
            (format!("{prefix}4"), &self.p4),
            (format!("{prefix}5"), &self.p5),
        ]
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, outcome) in self.outcomes() {
            match outcome {
                Outcome::Pass => writeln!(f, "{name}: ok")?,
                Outcome::Skipped => writeln!(f, "{name}: skipped")?,
                Outcome::Fail(why) => writeln!(f, "{name}: FAIL ({why})")?,
            }
        }
        Ok(())
    }
}

/// Evaluates the axioms. With `connected == false` the connectedness axiom
/// is skipped, which characterizes possibly disconnected graphs.
pub fn check_axioms(c: &HarmonicCollection, connected: bool) -> AxiomReport {
    let averages = c.averages();

    let mut member_failures = Vec::new();
    for (s, avg) in c.sets.iter().zip(&averages) {
        if s.distinct_len() < 3 {
            member_failures.push(format!("{{{s}}} has fewer than three elements"));
        }
        match avg {
            Some(a) if s.contains(*a) => {
                if c.mode == Mode::Multi && !s.multiplicity(*a).is_one() {
                    member_failures.push(format!("average {a} of {{{s}}} must occur once"));
                }
            }
            _ => member_failures.push(format!("{{{s}}} is not harmonic")),
        }
    }

    let union = c.union();
    let p1 = match (union.first(), union.last()) {
        (Some(&lo), Some(&hi)) if (hi - lo + 1) as usize == union.len() => Outcome::Pass,
        (Some(&lo), Some(&hi)) => {
            let missing: Vec<i64> = (lo..=hi).filter(|x| !union.contains(x)).collect();
            Outcome::Fail(format!("union misses {missing:?}"))
        }
        _ => Outcome::Fail("empty collection".to_string()),
    };

    let mut p2_failures = Vec::new();
    let rational: Vec<Option<BigRational>> = c.sets.iter().map(|s| s.average().ok()).collect();
    for i in 0..c.sets.len() {
        for j in i + 1..c.sets.len() {
            if rational[i].is_some() && rational[i] == rational[j] {
                p2_failures.push(format!("{{{}}} and {{{}}} share their average", c.sets[i], c.sets[j]));
            }
        }
    }

    let average_set: BTreeSet<i64> = averages.iter().flatten().copied().collect();
    let mut occurrences: BTreeMap<i64, usize> = BTreeMap::new();
    for s in &c.sets {
        for x in s.elements() {
            *occurrences.entry(x).or_default() += 1;
        }
    }
    let p3_failures: Vec<String> = occurrences
        .iter()
        .filter(|&(x, &count)| count > 1 && !average_set.contains(x))
        .map(|(x, _)| format!("{x} is shared but is not an average"))
        .collect();

    let mut p4_failures = Vec::new();
    for (i, a) in c.sets.iter().enumerate() {
        let Some(av_a) = averages[i] else { continue };
        for (j, b) in c.sets.iter().enumerate() {
            if i == j || !b.contains(av_a) {
                continue;
            }
            let back = averages[j].map(|av_b| a.multiplicity(av_b)).unwrap_or_default();
            let forth = b.multiplicity(av_a);
            let ok = match c.mode {
                Mode::Simple => back > BigUint::default(),
                Mode::Multi => back == forth,
            };
            if !ok {
                p4_failures.push(format!(
                    "average {av_a} of {{{a}}} lies in {{{b}}} without the converse"
                ));
            }
        }
    }

    let p5 = if connected {
        let k = c.sets.len();
        let mut out = vec![Vec::new(); k];
        for i in 0..k {
            if let Some(av_i) = averages[i] {
                for j in 0..k {
                    if i != j && c.sets[j].contains(av_i) {
                        out[i].push(j);
                    }
                }
            }
        }
        let mut failures = Vec::new();
        'outer: for start in 0..k {
            let mut seen = vec![false; k];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for &j in &out[i] {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            if let Some(missing) = seen.iter().position(|s| !s) {
                failures.push(format!(
                    "no chain from {{{}}} to {{{}}}",
                    c.sets[start], c.sets[missing]
                ));
                break 'outer;
            }
        }
        Outcome::from_failures(failures)
    } else {
        Outcome::Skipped
    };

    AxiomReport {
        mode: c.mode,
        members: Outcome::from_failures(member_failures),
        p1,
        p2: Outcome::from_failures(p2_failures),
        p3: Outcome::from_failures(p3_failures),
        p4: Outcome::from_failures(p4_failures),
        p5,
    }
}

/// Checks of the leafless characterization over a finite window of an
/// (infinite) collection given by its finite part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZpWindowReport {
    pub lo: i64,
    pub hi: i64,
    /// Every `k` in `[lo, hi]` is the average of some member.
    pub zp1_window: Outcome,
    pub zp2: Outcome,
    pub zp3: Outcome,
}

impl ZpWindowReport {
    pub fn passed(&self) -> bool {
        self.zp1_window.is_ok() && self.zp2.is_ok() && self.zp3.is_ok()
    }
}

/// ZP1 restricted to `[lo, hi]`, plus ZP2 and ZP3 over the given members.
pub fn check_zp_window(c: &HarmonicCollection, lo: i64, hi: i64) -> ZpWindowReport {
    let full = check_axioms(c, false);
    let averages: BTreeSet<i64> = c.averages().into_iter().flatten().collect();
    let missing: Vec<i64> = (lo..=hi).filter(|k| !averages.contains(k)).collect();
    let zp1_window = if missing.is_empty() {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("no member averages to {missing:?}"))
    };
    ZpWindowReport {
        lo,
        hi,
        zp1_window,
        zp2: full.p2,
        zp3: full.p4,
    }
}

/// Closed neighborhoods of the non-leaves of a weakly labeled graph.
pub fn extract_graph(g: &LabeledGraph) -> Result<HarmonicCollection, CorrespondenceError> {
    ensure_verified(verify_weak(g))?;
    let sets = (0..g.n())
        .filter(|&v| !g.is_leaf(v))
        .map(|v| {
            let closed = std::iter::once(v).chain(g.neighbors(v).iter().copied());
            Multiset::from_set(closed.map(|x| x as i64))
        })
        .collect();
    HarmonicCollection::new(Mode::Simple, sets)
}

/// Closed multi-neighborhoods `{v} ∪ {w^m(v,w)}` of the non-leaves.
pub fn extract_multigraph(g: &LabeledMultigraph) -> Result<HarmonicCollection, CorrespondenceError> {
    ensure_verified(verify_weak_multi(g))?;
    let mut sets = Vec::new();
    for v in (0..g.n()).filter(|&v| !g.is_leaf(v)) {
        let mut m = Multiset::from_set([v as i64]);
        for (w, k) in g.neighbors(v) {
            m.insert(w as i64, k.clone())
                .expect("stored multiplicities are positive");
        }
        sets.push(m);
    }
    HarmonicCollection::new(Mode::Multi, sets)
}

fn ensure_verified(report: VerifyReport) -> Result<(), CorrespondenceError> {
    if report.is_verified() {
        Ok(())
    } else {
        Err(CorrespondenceError::NotVerified(
            report.failures().map(|b| b.vertex).collect(),
        ))
    }
}

type WeightedEdge = (usize, usize, BigUint);

/// Edges `(i, j, m)` with `i < j` read off the collection, translated so
/// the union starts at zero. Multiplicities stated from both ends must agree.
fn collection_edges(
    c: &HarmonicCollection,
    connected: bool,
) -> Result<(usize, Vec<WeightedEdge>), CorrespondenceError> {
    let report = check_axioms(c, connected);
    if !report.passed() {
        return Err(CorrespondenceError::Axioms(Box::new(report)));
    }
    let union = c.union();
    let lo = *union.first().expect("P1 passed");
    let hi = *union.last().expect("P1 passed");
    let n = (hi - lo + 1) as usize;

    let mut edges: BTreeMap<(i64, i64), BigUint> = BTreeMap::new();
    for s in &c.sets {
        let center = integer_average(s).expect("members are harmonic");
        for (j, k) in s.iter() {
            if j == center {
                continue;
            }
            let key = (center.min(j), center.max(j));
            match edges.get(&key) {
                Some(existing) if existing != k => {
                    return Err(CorrespondenceError::InconsistentMultiplicity(key.0, key.1));
                }
                Some(_) => {}
                None => {
                    edges.insert(key, k.clone());
                }
            }
        }
    }
    let edges = edges
        .into_iter()
        .map(|((a, b), k)| ((a - lo) as usize, (b - lo) as usize, k))
        .collect();
    Ok((n, edges))
}

/// The graph of a collection of harmonic subsets. With `connected` the
/// connectedness axiom is enforced.
pub fn build_graph(c: &HarmonicCollection, connected: bool) -> Result<LabeledGraph, CorrespondenceError> {
    if let Some(s) = c.sets.iter().find(|s| !s.is_set()) {
        return Err(CorrespondenceError::MultiplicityInSimpleMode(s.to_string()));
    }
    let (n, edges) = collection_edges(c, connected)?;
    let edges = edges.into_iter().map(|(a, b, _)| (a, b));
    Ok(LabeledGraph::new_disconnected(n, edges)?)
}

/// The multigraph of a collection of harmonic multisets.
pub fn build_multigraph(c: &HarmonicCollection, connected: bool) -> Result<LabeledMultigraph, CorrespondenceError> {
    let (n, edges) = collection_edges(c, connected)?;
    Ok(LabeledMultigraph::new_disconnected(n, edges)?)
}

/// `build(extract(g)) == g` and `extract(build(extract(g))) == extract(g)`.
pub fn roundtrip_check(g: &LabeledGraph) -> bool {
    let Ok(c) = extract_graph(g) else { return false };
    let Ok(rebuilt) = build_graph(&c, g.is_connected()) else {
        return false;
    };
    rebuilt.labeled_equal(g) && extract_graph(&rebuilt).map(|c2| c2 == c).unwrap_or(false)
}

pub fn roundtrip_check_multi(g: &LabeledMultigraph) -> bool {
    let Ok(c) = extract_multigraph(g) else { return false };
    let Ok(rebuilt) = build_multigraph(&c, g.is_connected()) else {
        return false;
    };
    rebuilt.labeled_equal(g) && extract_multigraph(&rebuilt).map(|c2| c2 == c).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_collection;

    fn coll(s: &str) -> HarmonicCollection {
        parse_collection(s, None).unwrap()
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> LabeledGraph {
        LabeledGraph::new(n, edges.iter().copied()).unwrap()
    }

    fn heavy_edge_star() -> LabeledMultigraph {
        LabeledMultigraph::new(5, [(0, 1, 6u32), (1, 2, 1), (1, 3, 1), (1, 4, 1)]).unwrap()
    }

    #[test]
    fn extract_small_trees() {
        let g = graph(7, &[(1, 2), (2, 3), (3, 4), (4, 5), (0, 3), (3, 6)]);
        assert_eq!(extract_graph(&g).unwrap(), coll("123;02346;345"));
        let star = graph(7, &[(0, 3), (1, 3), (2, 3), (3, 4), (3, 5), (3, 6)]);
        assert_eq!(extract_graph(&star).unwrap(), coll("0123456"));
    }

    #[test]
    fn extract_heavy_edge_star() {
        let c = extract_multigraph(&heavy_edge_star()).unwrap();
        assert_eq!(c.to_string(), "0^6,1,2,3,4");
    }

    #[test]
    fn extract_rejects_unverified() {
        let bad = graph(4, &[(0, 1), (1, 2), (1, 3)]);
        assert_eq!(extract_graph(&bad), Err(CorrespondenceError::NotVerified(vec![1])));
    }

    #[test]
    fn axioms_of_double_star() {
        assert!(check_axioms(&coll("01347;23456"), true).passed());
    }

    #[test]
    fn printed_caption_fails_p3() {
        // Caption of the second eight-vertex entry; its drawing gives 01347;23456.
        let report = check_axioms(&coll("01347;13457"), true);
        assert!(!report.passed());
        assert!(!report.p3.is_ok());
    }

    #[test]
    fn disconnected_collection_needs_p5_skipped() {
        let c = coll("012;345");
        let strict = check_axioms(&c, true);
        assert!(!strict.p5.is_ok());
        assert!(strict.p1.is_ok() && strict.p2.is_ok() && strict.p3.is_ok() && strict.p4.is_ok());
        let loose = check_axioms(&c, false);
        assert!(loose.passed());
        assert_eq!(loose.p5, Outcome::Skipped);
    }

    #[test]
    fn equal_averages_fail_p2() {
        // {0,1,3} averages to 4/3, so it is the member check that trips.
        let report = check_axioms(&coll("012;013"), true);
        assert!(!report.members.is_ok());
        assert!(report.p2.is_ok());
        let report = check_axioms(&coll("0,1,2;-1,1,3"), true);
        assert!(!report.p2.is_ok());
    }

    #[test]
    fn members_must_be_nontrivial_harmonic() {
        let report = check_axioms(&coll("01;123"), true);
        assert!(!report.members.is_ok());
        let report = check_axioms(&coll("2456;012"), true);
        assert!(!report.members.is_ok());
    }

    #[test]
    fn multi_p4_matches_multiplicities() {
        // 1 ~ 2 with multiplicity 2 from 1's side but 1 from 2's side.
        let c = parse_collection("0^3,1,2^2,3;1,2,3", None).unwrap();
        let report = check_axioms(&c, true);
        assert!(!report.p4.is_ok(), "{report}");
    }

    #[test]
    fn build_three_set_tree() {
        let g = build_graph(&coll("024567;3458;135"), true).unwrap();
        let expected = graph(9, &[(0, 4), (2, 4), (4, 5), (4, 6), (4, 7), (3, 5), (5, 8), (1, 3)]);
        assert_eq!(g, expected);
        assert!(verify_weak(&g).is_verified());
        assert_eq!(g.leaves(), vec![0, 1, 2, 6, 7, 8]);
    }

    #[test]
    fn build_star_and_multigraph() {
        let star = build_graph(&coll("01234"), true).unwrap();
        assert_eq!(star, graph(5, &[(0, 2), (1, 2), (2, 3), (2, 4)]));
        let m = build_multigraph(&coll("0^6,1,2,3,4"), true).unwrap();
        assert_eq!(m, heavy_edge_star());
    }

    #[test]
    fn build_translates_to_zero() {
        let g = build_graph(&coll("3,4,5"), true).unwrap();
        assert_eq!(g, graph(3, &[(0, 1), (1, 2)]));
    }

    #[test]
    fn build_reports_axiom_failure() {
        match build_graph(&coll("012;345"), true) {
            Err(CorrespondenceError::Axioms(report)) => assert!(!report.p5.is_ok()),
            other => panic!("unexpected {other:?}"),
        }
        let g = build_graph(&coll("012;345"), false).unwrap();
        assert!(!g.is_connected());
    }

    #[test]
    fn roundtrips() {
        assert!(roundtrip_check(&graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)])));
        assert!(roundtrip_check_multi(&heavy_edge_star()));
        let right = LabeledMultigraph::new(
            8,
            [
                (0, 1, 13u32),
                (1, 2, 2),
                (1, 3, 1),
                (1, 5, 1),
                (1, 6, 1),
                (2, 4, 1),
                (3, 4, 2),
                (4, 5, 4),
                (5, 6, 8),
                (6, 7, 13),
            ],
        )
        .unwrap();
        assert!(verify_weak_multi(&right).is_verified());
        assert!(roundtrip_check_multi(&right));
    }

    #[test]
    fn zp_window() {
        // Finite part of the integer path restricted to [-3, 3].
        let sets = (-3..=3).map(|k| Multiset::from_set([k - 1, k, k + 1])).collect();
        let c = HarmonicCollection::new(Mode::Simple, sets).unwrap();
        assert!(check_zp_window(&c, -3, 3).passed());
        assert!(!check_zp_window(&c, -5, 3).passed());
    }
}
