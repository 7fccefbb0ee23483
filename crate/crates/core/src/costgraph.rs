//! Cost graphs over a collection: complete, or sparsified by min-hash LSH.
//!
//! The weight of edge `(i, j)` is the number of phrases in the greedy parsing
//! of sequence `j` against sequence `i`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corpus::Collection;
use crate::parse::{greedy_phrase_count, Matcher};

/// Weighted directed edge between 0-based sequence indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: i64,
}

/// Weighted digraph on `m` sequences. Edges are sorted by `(src, dst)`,
/// contain no self-loops and no duplicate pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostGraph {
    m: usize,
    edges: Vec<Edge>,
}

impl CostGraph {
    /// Builds a graph from arbitrary edges, dropping self-loops and keeping
    /// the first weight seen for a duplicated pair.
    pub fn new(m: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut by_pair = BTreeMap::new();
        for e in edges {
            assert!(e.src < m && e.dst < m, "edge endpoint out of range");
            if e.src != e.dst {
                by_pair.entry((e.src, e.dst)).or_insert(e.weight);
            }
        }
        let edges = by_pair
            .into_iter()
            .map(|((src, dst), weight)| Edge { src, dst, weight })
            .collect();
        Self { m, edges }
    }

    pub fn node_count(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self, src: usize, dst: usize) -> Option<i64> {
        self.edges
            .binary_search_by_key(&(src, dst), |e| (e.src, e.dst))
            .ok()
            .map(|k| self.edges[k].weight)
    }

    pub fn is_strongly_connected(&self) -> bool {
        is_strongly_connected(self.m, self.edges.iter().map(|e| (e.src, e.dst)))
    }

    /// Writes `src,dst,weight` lines with 0-based ids.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "src,dst,weight")?;
        for e in &self.edges {
            writeln!(out, "{},{},{}", e.src, e.dst, e.weight)?;
        }
        out.flush()
    }
}

/// True iff every node reaches every other node. A single node (or none)
/// is trivially strongly connected.
pub fn is_strongly_connected(m: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> bool {
    if m <= 1 {
        return true;
    }
    let mut fwd = vec![Vec::new(); m];
    let mut rev = vec![Vec::new(); m];
    for (u, v) in edges {
        fwd[u].push(v);
        rev[v].push(u);
    }
    reaches_all(&fwd) && reaches_all(&rev)
}

fn reaches_all(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == adj.len()
}

/// Amount of string work spent weighing a set of edges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseWork {
    pub matchers_built: usize,
    pub parses: usize,
}

/// Computes greedy phrase counts for `pairs`, building one matcher per
/// distinct source. Sources are processed in parallel on the current rayon
/// pool; the result does not depend on scheduling.
pub fn weigh_edges(collection: &Collection, pairs: &BTreeSet<(usize, usize)>) -> (Vec<Edge>, ParseWork) {
    let mut by_src: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(src, dst) in pairs {
        by_src.entry(src).or_default().push(dst);
    }
    let groups: Vec<(usize, Vec<usize>)> = by_src.into_iter().collect();
    let edges: Vec<Edge> = groups
        .par_iter()
        .flat_map_iter(|(src, dsts)| {
            let matcher = Matcher::new(collection.sequence(*src));
            dsts.iter()
                .map(|&dst| Edge {
                    src: *src,
                    dst,
                    weight: greedy_phrase_count(&matcher, collection.sequence(dst)) as i64,
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let work = ParseWork {
        matchers_built: groups.len(),
        parses: edges.len(),
    };
    (edges, work)
}

/// All `m(m-1)` ordered pairs, weighted.
pub fn complete_cost_graph(collection: &Collection) -> CostGraph {
    complete_cost_graph_with_work(collection).0
}

pub fn complete_cost_graph_with_work(collection: &Collection) -> (CostGraph, ParseWork) {
    let m = collection.len();
    let pairs = (0..m)
        .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let (edges, work) = weigh_edges(collection, &pairs);
    (CostGraph::new(m, edges), work)
}

/// Parameters of the LSH sparsification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LshParams {
    /// k-mer length.
    pub k: usize,
    /// Hash functions per round; a fingerprint has `q` minima.
    pub q: usize,
    /// Prune the active set every `c` rounds.
    pub prune_every: usize,
    pub seed: u64,
    pub max_rounds: usize,
}

impl Default for LshParams {
    fn default() -> Self {
        Self {
            k: 256,
            q: 4,
            prune_every: 10,
            seed: 0,
            max_rounds: 1000,
        }
    }
}

impl LshParams {
    fn validate(&self) {
        assert!(self.k >= 1 && self.q >= 1 && self.prune_every >= 1, "k, q and c must be at least 1");
    }
}

/// Min-hash sketch of one sequence: one minimum per hash function.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint(pub Vec<u32>);

/// Odd base of the polynomial hash that reduces a k-mer to one word.
pub const KMER_BASE: u64 = 0x100000001b3;

/// Output bits of each multiply-shift hash function.
pub const HASH_BITS: u32 = 32;

/// Random odd multipliers of the `q` multiply-shift functions of one round.
pub fn round_multipliers(q: usize, round_seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(round_seed);
    (0..q).map(|_| rng.random::<u64>() | 1).collect()
}

#[inline]
pub fn multiply_shift(a: u64, x: u64) -> u32 {
    (a.wrapping_mul(x) >> (64 - HASH_BITS)) as u32
}

/// Polynomial hash `sum s[i] * B^(len-1-i)` modulo 2^64.
pub fn polynomial_hash(s: &[u8]) -> u64 {
    s.iter()
        .fold(0u64, |h, &b| h.wrapping_mul(KMER_BASE).wrapping_add(u64::from(b)))
}

/// Words of every k-mer of `seq` in order, or the whole-string hash if
/// `seq` is shorter than `k`.
fn for_each_kmer_word(seq: &[u8], k: usize, mut f: impl FnMut(u64)) {
    if seq.len() < k {
        f(polynomial_hash(seq));
        return;
    }
    // B^(k-1), the weight of the byte leaving the window.
    let top = (1..k).fold(1u64, |p, _| p.wrapping_mul(KMER_BASE));
    let mut h = polynomial_hash(&seq[..k]);
    f(h);
    for i in k..seq.len() {
        h = h
            .wrapping_sub(u64::from(seq[i - k]).wrapping_mul(top))
            .wrapping_mul(KMER_BASE)
            .wrapping_add(u64::from(seq[i]));
        f(h);
    }
}

pub fn fingerprint(seq: &[u8], params: &LshParams, round_seed: u64) -> Fingerprint {
    params.validate();
    fingerprint_with(seq, params.k, &round_multipliers(params.q, round_seed))
}

fn fingerprint_with(seq: &[u8], k: usize, multipliers: &[u64]) -> Fingerprint {
    let mut minima = vec![u32::MAX; multipliers.len()];
    for_each_kmer_word(seq, k, |x| {
        for (m, &a) in minima.iter_mut().zip(multipliers) {
            *m = (*m).min(multiply_shift(a, x));
        }
    });
    Fingerprint(minima)
}

/// `ceil(2 * sqrt(m))`, both the bucket-size cap and the completion threshold.
pub fn group_cap(m: usize) -> usize {
    let mut c = (2.0 * (m as f64).sqrt()).ceil() as usize;
    // Correct floating point rounding at perfect squares.
    while c > 0 && (c - 1) * (c - 1) >= 4 * m {
        c -= 1;
    }
    while c * c < 4 * m {
        c += 1;
    }
    c
}

/// Record of how the sparse edge set was found.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseTrace {
    pub rounds: usize,
    pub prunes: usize,
    /// The active set dropped to the completion threshold and was closed off.
    pub completed: bool,
    /// `max_rounds` elapsed and the star fallback was applied.
    pub fallback: bool,
    /// Total collisions per sequence at the end.
    pub collisions: Vec<usize>,
    /// Ordered pairs added, in the order they were added.
    pub added: Vec<(usize, usize)>,
    pub work: ParseWork,
}

pub fn sparse_cost_graph(collection: &Collection, params: &LshParams) -> CostGraph {
    sparse_cost_graph_traced(collection, params).0
}

pub fn sparse_cost_graph_traced(collection: &Collection, params: &LshParams) -> (CostGraph, SparseTrace) {
    params.validate();
    let m = collection.len();
    let cap = group_cap(m);
    let mut builder = EdgeSetBuilder::new(m);
    let mut trace = SparseTrace::default();
    let mut collisions = vec![0usize; m];
    let mut active: Vec<usize> = (0..m).collect();
    let mut seeds = ChaCha8Rng::seed_from_u64(params.seed);

    while !builder.connected() {
        if active.len() <= cap {
            builder.add_clique(&active);
            trace.completed = true;
            break;
        }
        if trace.rounds == params.max_rounds {
            let hub = argmax_lowest(&collisions, 0..m);
            let hub_root = builder.find(hub);
            let outside: Vec<usize> = (0..m).filter(|&v| builder.find(v) != hub_root).collect();
            for v in outside {
                builder.add(hub, v);
                builder.add(v, hub);
            }
            trace.fallback = true;
            break;
        }
        trace.rounds += 1;

        let multipliers = round_multipliers(params.q, seeds.random());
        let prints: Vec<Fingerprint> = active
            .par_iter()
            .map(|&i| fingerprint_with(collection.sequence(i), params.k, &multipliers))
            .collect();
        let mut groups: BTreeMap<Fingerprint, Vec<usize>> = BTreeMap::new();
        for (print, &i) in prints.into_iter().zip(&active) {
            groups.entry(print).or_default().push(i);
        }
        for group in groups.values().filter(|g| g.len() >= 2 && g.len() <= cap) {
            for &i in group {
                collisions[i] += group.len();
            }
            builder.add_clique(group);
        }

        if trace.rounds % params.prune_every == 0 && !builder.connected() {
            let mut best: BTreeMap<usize, usize> = BTreeMap::new();
            for &i in &active {
                let comp = builder.find(i);
                match best.get(&comp) {
                    Some(&j) if collisions[j] >= collisions[i] => {}
                    _ => {
                        best.insert(comp, i);
                    }
                }
            }
            active = best.into_values().collect();
            active.sort_unstable();
            trace.prunes += 1;
        }
    }

    let (edges, work) = weigh_edges(collection, &builder.pairs);
    trace.collisions = collisions;
    trace.added = builder.added;
    trace.work = work;
    (CostGraph::new(m, edges), trace)
}

/// Index of the largest value, lowest index on ties.
fn argmax_lowest(values: &[usize], range: impl Iterator<Item = usize>) -> usize {
    range
        .fold(None, |best: Option<usize>, i| match best {
            Some(b) if values[b] >= values[i] => Some(b),
            _ => Some(i),
        })
        .expect("non-empty range")
}

/// Growing set of symmetric pairs with union-find over its undirected view.
struct EdgeSetBuilder {
    pairs: BTreeSet<(usize, usize)>,
    added: Vec<(usize, usize)>,
    parent: Vec<usize>,
    components: usize,
}

impl EdgeSetBuilder {
    fn new(m: usize) -> Self {
        Self {
            pairs: BTreeSet::new(),
            added: Vec::new(),
            parent: (0..m).collect(),
            components: m,
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn add(&mut self, u: usize, v: usize) {
        if u == v || !self.pairs.insert((u, v)) {
            return;
        }
        self.added.push((u, v));
        let (a, b) = (self.find(u), self.find(v));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
            self.components -= 1;
        }
    }

    fn add_clique(&mut self, nodes: &[usize]) {
        for &u in nodes {
            for &v in nodes {
                self.add(u, v);
            }
        }
    }

    /// Every pair is added in both directions, so undirected connectivity is
    /// strong connectivity.
    fn connected(&self) -> bool {
        self.components <= 1
    }
}
