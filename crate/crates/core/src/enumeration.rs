//! Exhaustive enumeration of weakly labeled graphs on `[0, n-1]`.
//!
//! The search walks harmonic collections rather than graphs. It first fixes
//! the set of averages (the non-leaves), then, in increasing order, picks the
//! closed neighborhood of each average so that it balances to that average.
//! Adjacency between two averages is decided once, by the smaller one, which
//! keeps the collection symmetric; every leaf must land in exactly one
//! neighborhood. Each root choice of the average set is an independent task.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::correspondence::{
    build_graph, build_multigraph, extract_graph, CorrespondenceError, HarmonicCollection, Mode,
};
use crate::graph::{GraphError, GraphView, LabeledGraph, MIN_VERTICES};
use crate::harmonic::{verify_weak, Multiset};

/// Default cap on `n`. On a single core n = 14 takes seconds and each
/// further step costs six to ten times more.
pub const DEFAULT_LIMIT: usize = 14;

/// Largest `n` accepted by [`brute_force_oracle`].
pub const BRUTE_FORCE_MAX: usize = 7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnumError {
    #[error("n = {0} is below the minimum of {MIN_VERTICES} vertices")]
    TooSmall(usize),
    #[error("n = {n} exceeds the configured limit {limit}")]
    OverLimit { n: usize, limit: usize },
    #[error("max_multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("brute force is limited to n <= {BRUTE_FORCE_MAX}, got {0}")]
    BruteForceTooLarge(usize),
    #[error("at least one copy is required")]
    NoCopies,
    #[error("input graph is not weakly labeled")]
    NotVerified,
    #[error("could not build worker pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumOptions {
    pub n: usize,
    pub connected: bool,
    /// 1 enumerates simple graphs.
    pub max_multiplicity: u32,
    pub dedup_inversion: bool,
    /// Worker threads; `None` uses the global pool. Never affects output.
    #[serde(skip)]
    pub threads: Option<usize>,
    #[serde(skip)]
    pub limit: usize,
}

impl EnumOptions {
    pub fn new(n: usize) -> Self {
        EnumOptions {
            n,
            connected: true,
            max_multiplicity: 1,
            dedup_inversion: false,
            threads: None,
            limit: DEFAULT_LIMIT,
        }
    }

    pub fn disconnected(mut self) -> Self {
        self.connected = false;
        self
    }

    pub fn max_multiplicity(mut self, k: u32) -> Self {
        self.max_multiplicity = k;
        self
    }

    pub fn dedup_inversion(mut self, on: bool) -> Self {
        self.dedup_inversion = on;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn mode(&self) -> Mode {
        if self.max_multiplicity > 1 {
            Mode::Multi
        } else {
            Mode::Simple
        }
    }

    fn validate(&self) -> Result<(), EnumError> {
        if self.n < MIN_VERTICES {
            return Err(EnumError::TooSmall(self.n));
        }
        if self.n > self.limit {
            return Err(EnumError::OverLimit {
                n: self.n,
                limit: self.limit,
            });
        }
        if self.max_multiplicity == 0 {
            return Err(EnumError::ZeroMultiplicity);
        }
        Ok(())
    }
}

/// Enumeration output in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub options: EnumOptions,
    pub entries: Vec<HarmonicCollection>,
}

#[derive(Serialize)]
struct CatalogJson<'a> {
    n: usize,
    options: &'a EnumOptions,
    count: usize,
    collections: Vec<String>,
}

impl Catalog {
    fn from_entries(options: EnumOptions, mut entries: Vec<HarmonicCollection>) -> Catalog {
        entries.sort_by_cached_key(|c| c.to_string());
        entries.dedup();
        Catalog { options, entries }
    }

    pub fn count(&self) -> usize {
        self.entries.len()
    }

    pub fn canonical_strings(&self) -> Vec<String> {
        self.entries.iter().map(ToString::to_string).collect()
    }

    pub fn contains(&self, c: &HarmonicCollection) -> bool {
        self.entries.contains(c)
    }

    /// Pretty JSON with a trailing newline. Identical across runs and
    /// worker counts.
    pub fn to_json(&self) -> String {
        let view = CatalogJson {
            n: self.options.n,
            options: &self.options,
            count: self.count(),
            collections: self.canonical_strings(),
        };
        let mut out = serde_json::to_string_pretty(&view).expect("catalog serializes");
        out.push('\n');
        out
    }
}

/// Every collection on `[0, n-1]` satisfying the axioms selected by `opts`.
pub fn enumerate(opts: &EnumOptions) -> Result<Catalog, EnumError> {
    opts.validate()?;
    let run = || -> Vec<HarmonicCollection> {
        average_sets(opts.n)
            .into_par_iter()
            .flat_map_iter(|averages| {
                let mut found = Vec::new();
                let mut search = Search::new(opts, &averages);
                search.run(&mut |s| {
                    found.push(s.collection());
                    true
                });
                found
            })
            .collect()
    };
    let mut entries = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| EnumError::ThreadPool(e.to_string()))?
            .install(run),
        None => run(),
    };
    if opts.dedup_inversion {
        let top = opts.n as i64 - 1;
        entries.retain(|c| c.to_string() <= c.reflect(top).to_string());
    }
    Ok(Catalog::from_entries(opts.clone(), entries))
}

/// Non-empty subsets of `[1, n-2]`: candidates for the set of non-leaves.
/// The extreme labels are always leaves.
fn average_sets(n: usize) -> Vec<Vec<usize>> {
    let inner = n - 2;
    (1u64..(1u64 << inner))
        .map(|mask| (0..inner).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect())
        .collect()
}

/// Randomized depth-first search that returns the first collection found.
/// Useful for drawing varied labeled graphs beyond catalog sizes.
pub fn sample<R: Rng>(opts: &EnumOptions, rng: &mut R, attempts: usize) -> Option<HarmonicCollection> {
    if opts.validate().is_err() {
        return None;
    }
    let inner: Vec<usize> = (1..opts.n - 1).collect();
    for _ in 0..attempts {
        let mut averages: Vec<usize> = inner.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if averages.is_empty() {
            continue;
        }
        averages.sort_unstable();
        let mut search = Search::new(opts, &averages);
        search.shuffle = Some(rng.gen());
        search.budget = Some(20_000);
        let mut hit = None;
        search.run(&mut |s| {
            hit = Some(s.collection());
            false
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

struct Candidate {
    label: usize,
    offset: i64,
    min: u32,
}

struct Search<'a> {
    n: usize,
    max_mult: u32,
    connected: bool,
    averages: &'a [usize],
    is_average: Vec<bool>,
    /// Row-major `n x n` multiplicities decided so far.
    mult: Vec<u32>,
    covered: Vec<bool>,
    uncovered: usize,
    shuffle: Option<u64>,
    budget: Option<u64>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(opts: &EnumOptions, averages: &'a [usize]) -> Self {
        let n = opts.n;
        let mut is_average = vec![false; n];
        for &t in averages {
            is_average[t] = true;
        }
        Search {
            n,
            max_mult: opts.max_multiplicity,
            connected: opts.connected,
            averages,
            is_average,
            mult: vec![0; n * n],
            covered: vec![false; n],
            uncovered: n - averages.len(),
            shuffle: None,
            budget: None,
            nodes: 0,
        }
    }

    /// Runs the search; `emit` returns false to stop early.
    fn run(&mut self, emit: &mut dyn FnMut(&Search) -> bool) {
        self.place(0, emit);
    }

    fn exhausted(&self) -> bool {
        self.budget.is_some_and(|b| self.nodes > b)
    }

    fn place(&mut self, idx: usize, emit: &mut dyn FnMut(&Search) -> bool) -> bool {
        self.nodes += 1;
        if self.exhausted() {
            return false;
        }
        if idx == self.averages.len() {
            if self.uncovered == 0 && (!self.connected || self.is_graph_connected()) {
                return emit(self);
            }
            return true;
        }
        let t = self.averages[idx];
        let n = self.n;
        let last = idx + 1 == self.averages.len();

        let mut target = 0i64;
        let mut has_forced = false;
        for &s in &self.averages[..idx] {
            let m = self.mult[s * n + t];
            if m > 0 {
                has_forced = true;
                target -= m as i64 * (s as i64 - t as i64);
            }
        }

        let mut candidates: Vec<Candidate> = Vec::new();
        for &u in &self.averages[idx + 1..] {
            candidates.push(Candidate {
                label: u,
                offset: u as i64 - t as i64,
                min: 0,
            });
        }
        for l in 0..n {
            if !self.is_average[l] && !self.covered[l] {
                candidates.push(Candidate {
                    label: l,
                    offset: l as i64 - t as i64,
                    min: u32::from(last),
                });
            }
        }
        if let Some(seed) = self.shuffle {
            use rand::SeedableRng;
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed ^ (idx as u64).wrapping_mul(0x9E37_79B9));
            candidates.shuffle(&mut rng);
        }

        // Reachable range of the remaining contribution from position i on.
        let k = self.max_mult as i64;
        let mut lo_suffix = vec![0i64; candidates.len() + 1];
        let mut hi_suffix = vec![0i64; candidates.len() + 1];
        for i in (0..candidates.len()).rev() {
            let c = &candidates[i];
            let (a, b) = (c.min as i64 * c.offset, k * c.offset);
            lo_suffix[i] = lo_suffix[i + 1] + a.min(b);
            hi_suffix[i] = hi_suffix[i + 1] + a.max(b);
        }

        let mut choice = vec![0u32; candidates.len()];
        self.choose(
            idx,
            t,
            &candidates,
            &lo_suffix,
            &hi_suffix,
            0,
            target,
            has_forced,
            &mut choice,
            emit,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        idx: usize,
        t: usize,
        candidates: &[Candidate],
        lo_suffix: &[i64],
        hi_suffix: &[i64],
        pos: usize,
        remaining: i64,
        has_neighbor: bool,
        choice: &mut Vec<u32>,
        emit: &mut dyn FnMut(&Search) -> bool,
    ) -> bool {
        if remaining < lo_suffix[pos] || remaining > hi_suffix[pos] {
            return true;
        }
        if pos == candidates.len() {
            if remaining != 0 || !has_neighbor {
                return true;
            }
            return self.commit(idx, t, candidates, choice, emit);
        }
        let c = &candidates[pos];
        for m in c.min..=self.max_mult {
            choice[pos] = m;
            let next = remaining - m as i64 * c.offset;
            if !self.choose(
                idx,
                t,
                candidates,
                lo_suffix,
                hi_suffix,
                pos + 1,
                next,
                has_neighbor || m > 0,
                choice,
                emit,
            ) {
                choice[pos] = 0;
                return false;
            }
        }
        choice[pos] = 0;
        true
    }

    fn commit(
        &mut self,
        idx: usize,
        t: usize,
        candidates: &[Candidate],
        choice: &[u32],
        emit: &mut dyn FnMut(&Search) -> bool,
    ) -> bool {
        let n = self.n;
        for (c, &m) in candidates.iter().zip(choice) {
            if m == 0 {
                continue;
            }
            self.mult[t * n + c.label] = m;
            self.mult[c.label * n + t] = m;
            if !self.is_average[c.label] {
                self.covered[c.label] = true;
                self.uncovered -= 1;
            }
        }
        let go_on = self.place(idx + 1, emit);
        for (c, &m) in candidates.iter().zip(choice) {
            if m == 0 {
                continue;
            }
            self.mult[t * n + c.label] = 0;
            self.mult[c.label * n + t] = 0;
            if !self.is_average[c.label] {
                self.covered[c.label] = false;
                self.uncovered += 1;
            }
        }
        go_on
    }

    fn is_graph_connected(&self) -> bool {
        let n = self.n;
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for (w, s) in seen.iter_mut().enumerate() {
                if !*s && self.mult[v * n + w] > 0 {
                    *s = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    fn collection(&self) -> HarmonicCollection {
        let n = self.n;
        let sets = self
            .averages
            .iter()
            .map(|&t| {
                let mut m = Multiset::from_set([t as i64]);
                for u in 0..n {
                    let k = self.mult[t * n + u];
                    if k > 0 {
                        m.insert(u as i64, BigUint::from(k)).expect("positive");
                    }
                }
                m
            })
            .collect();
        let mode = if self.max_mult > 1 { Mode::Multi } else { Mode::Simple };
        HarmonicCollection::new(mode, sets).expect("search emits valid sets")
    }
}

/// Calls `f` on every connected simple graph on `[0, n-1]`, one per edge set.
pub fn for_each_connected_graph(n: usize, mut f: impl FnMut(&LabeledGraph)) -> Result<(), EnumError> {
    if n < MIN_VERTICES {
        return Err(EnumError::TooSmall(n));
    }
    if n > BRUTE_FORCE_MAX {
        return Err(EnumError::BruteForceTooLarge(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut adj = [0u32; BRUTE_FORCE_MAX];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
        let mut reach = 1u32;
        loop {
            let mut next = reach;
            for (v, &row) in adj.iter().enumerate().take(n) {
                if reach >> v & 1 == 1 {
                    next |= row;
                }
            }
            if next == reach {
                break;
            }
            reach = next;
        }
        if reach.count_ones() as usize != n {
            continue;
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        f(&LabeledGraph::new_disconnected(n, edges)?);
    }
    Ok(())
}

/// Independent check of [`enumerate`] for small `n`: tries every edge set on
/// `[0, n-1]` and keeps the connected, weakly harmonic ones.
pub fn brute_force_oracle(n: usize) -> Result<Catalog, EnumError> {
    let mut entries = Vec::new();
    let mut failure = None;
    for_each_connected_graph(n, |g| {
        if failure.is_some() || !verify_weak(g).is_verified() {
            return;
        }
        match extract_graph(g) {
            Ok(c) => entries.push(c),
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok(Catalog::from_entries(EnumOptions::new(n), entries))
}

/// Collections whose graph is disconnected, every component having at least
/// three vertices.
pub fn disconnected_samples(n: usize) -> Result<Catalog, EnumError> {
    let opts = EnumOptions::new(n).disconnected();
    let all = enumerate(&opts)?;
    let mut entries = Vec::new();
    for c in all.entries {
        let g = build_multigraph(&c, false)?;
        let comps = g.components();
        if comps.len() > 1 && comps.iter().all(|comp| comp.len() >= MIN_VERTICES) {
            entries.push(c);
        }
    }
    Ok(Catalog::from_entries(opts, entries))
}

/// `k` disjoint copies of `g`, vertex `v` of copy `i` (1-based) relabeled
/// `k*v + i - 1`.
pub fn disjoint_copies(g: &LabeledGraph, k: usize) -> Result<LabeledGraph, EnumError> {
    if k == 0 {
        return Err(EnumError::NoCopies);
    }
    if !verify_weak(g).is_verified() {
        return Err(EnumError::NotVerified);
    }
    let edges = g
        .edges()
        .into_iter()
        .flat_map(|(a, b)| (0..k).map(move |i| (k * a + i, k * b + i)));
    Ok(LabeledGraph::new_disconnected(g.n() * k, edges)?)
}

/// Graph of every catalog entry (simple mode).
pub fn catalog_graphs(catalog: &Catalog) -> Result<Vec<LabeledGraph>, EnumError> {
    catalog
        .entries
        .iter()
        .map(|c| build_graph(c, catalog.options.connected).map_err(EnumError::from))
        .collect()
}

/// Canonical strings of a catalog as a set, for order-insensitive comparison.
pub fn string_set(catalog: &Catalog) -> BTreeSet<String> {
    catalog.canonical_strings().into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_collection;

    fn strings(opts: &EnumOptions) -> Vec<String> {
        enumerate(opts).unwrap().canonical_strings()
    }

    fn canon(s: &str) -> String {
        parse_collection(s, None).unwrap().to_string()
    }

    #[test]
    fn five_vertices() {
        let mut expected = vec![canon("012;123;234"), canon("01234")];
        expected.sort();
        assert_eq!(strings(&EnumOptions::new(5)), expected);
    }

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (3..=9)
            .map(|n| enumerate(&EnumOptions::new(n)).unwrap().count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 1, 4, 6, 23]);
    }

    #[test]
    fn eight_vertices_match_drawings() {
        let got: BTreeSet<String> = strings(&EnumOptions::new(8)).into_iter().collect();
        let expected: BTreeSet<String> = [
            "012;123;234;345;456;567",
            "01347;23456",
            "03467;12345",
            "02346;13457",
            "0123456;357",
            "1234567;024",
        ]
        .iter()
        .map(|s| canon(s))
        .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn dedup_keeps_one_per_inversion_orbit() {
        let full = enumerate(&EnumOptions::new(8)).unwrap();
        let dedup = enumerate(&EnumOptions::new(8).dedup_inversion(true)).unwrap();
        // P_8, {01347;23456} and {02346;13457} are self-inverse.
        assert_eq!(dedup.count(), 4);
        for c in &full.entries {
            let inv = c.reflect(7);
            assert!(dedup.contains(c) || dedup.contains(&inv));
        }
    }

    #[test]
    fn oracle_small() {
        for n in 3..=6 {
            let oracle = brute_force_oracle(n).unwrap();
            assert_eq!(
                string_set(&oracle),
                string_set(&enumerate(&EnumOptions::new(n)).unwrap()),
                "n={n}"
            );
        }
        assert_eq!(
            brute_force_oracle(6).unwrap().canonical_strings(),
            vec![canon("012;123;234;345")]
        );
        assert_eq!(brute_force_oracle(8), Err(EnumError::BruteForceTooLarge(8)));
    }

    #[test]
    fn options_validation() {
        assert_eq!(enumerate(&EnumOptions::new(2)), Err(EnumError::TooSmall(2)));
        assert_eq!(
            enumerate(&EnumOptions::new(15)),
            Err(EnumError::OverLimit { n: 15, limit: 14 })
        );
        assert_eq!(
            enumerate(&EnumOptions::new(5).max_multiplicity(0)),
            Err(EnumError::ZeroMultiplicity)
        );
    }

    #[test]
    fn disconnected_examples() {
        let six = disconnected_samples(6).unwrap();
        assert!(six.contains(&parse_collection("012;345", None).unwrap()));
        assert!(six.contains(&parse_collection("135;024", None).unwrap()));
        let eight = disconnected_samples(8).unwrap();
        assert!(eight.contains(&parse_collection("1456;0237", None).unwrap()));
        assert!(eight.contains(&parse_collection("0457;1236", None).unwrap()));
        assert_eq!(disconnected_samples(5).unwrap().count(), 0);
    }

    #[test]
    fn copies() {
        let p3 = LabeledGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let two = disjoint_copies(&p3, 2).unwrap();
        assert_eq!(extract_graph(&two).unwrap(), parse_collection("135;024", None).unwrap());
        assert_eq!(disjoint_copies(&p3, 1).unwrap(), p3);
        assert_eq!(disjoint_copies(&p3, 0), Err(EnumError::NoCopies));
        let star = LabeledGraph::new(5, [(0, 2), (1, 2), (2, 3), (2, 4)]).unwrap();
        let stars = disjoint_copies(&star, 2).unwrap();
        assert_eq!(stars.n(), 10);
        assert!(verify_weak(&stars).is_verified());
        assert_eq!(stars.components().len(), 2);
    }

    #[test]
    fn multigraph_mode_contains_heavy_edge_star() {
        let cat = enumerate(&EnumOptions::new(5).max_multiplicity(6)).unwrap();
        assert!(cat.contains(&parse_collection("0^6,1,2,3,4", None).unwrap()));
        // Simple entries are present too, in multi mode.
        assert!(cat.contains(&parse_collection("01234", Some(Mode::Multi)).unwrap()));
    }

    #[test]
    fn sampler_finds_valid_collections() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in [6, 9, 11] {
            let c = sample(&EnumOptions::new(n), &mut rng, 200).expect("sample");
            assert!(crate::correspondence::check_axioms(&c, true).passed());
        }
    }

    #[test]
    fn json_is_stable() {
        let a = enumerate(&EnumOptions::new(7).threads(1)).unwrap().to_json();
        let b = enumerate(&EnumOptions::new(7).threads(3)).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.starts_with("{\n  \"n\": 7,"));
    }
}
