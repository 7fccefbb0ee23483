//! Test-only generators and oracles, independent of the library's algorithms.

#![allow(dead_code)]

use std::collections::VecDeque;

use hrlz::corpus::Collection;
use hrlz::costgraph::{CostGraph, Edge};
use rand::Rng;

pub const DNA: &[u8] = b"acgt";

pub fn alphabet(size: usize) -> Vec<u8> {
    match size {
        2 => b"ab".to_vec(),
        4 => DNA.to_vec(),
        _ => (0..=255u8).collect(),
    }
}

pub fn random_seq<R: Rng>(rng: &mut R, len: usize, alphabet: &[u8]) -> Vec<u8> {
    (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect()
}

/// Point substitutions: every position independently becomes a different
/// symbol with probability `rate`.
pub fn substitute<R: Rng>(rng: &mut R, seq: &[u8], rate: f64, alphabet: &[u8]) -> Vec<u8> {
    seq.iter()
        .map(|&b| {
            if alphabet.len() > 1 && rng.random_bool(rate) {
                loop {
                    let c = alphabet[rng.random_range(0..alphabet.len())];
                    if c != b {
                        break c;
                    }
                }
            } else {
                b
            }
        })
        .collect()
}

/// Substitutions plus short insertions and deletions.
pub fn mutate<R: Rng>(rng: &mut R, seq: &[u8], rate: f64, alphabet: &[u8], max_len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(seq.len() + 8);
    for &b in seq {
        if rng.random_bool(rate) {
            match rng.random_range(0..3) {
                0 => out.push(alphabet[rng.random_range(0..alphabet.len())]),
                1 => {}
                _ => {
                    out.push(b);
                    out.push(alphabet[rng.random_range(0..alphabet.len())]);
                }
            }
        } else {
            out.push(b);
        }
    }
    out.truncate(max_len);
    out
}

/// Random collection made of a few families of related sequences, sometimes
/// with unrelated strays.
pub fn fuzz_collection<R: Rng>(rng: &mut R, max_m: usize, max_len: usize, alphabet: &[u8]) -> Collection {
    let m = rng.random_range(1..=max_m);
    let families = rng.random_range(1..=4);
    let bases: Vec<Vec<u8>> = (0..families)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            random_seq(rng, len, alphabet)
        })
        .collect();
    let seqs = (0..m)
        .map(|_| {
            if rng.random_bool(0.1) {
                let len = rng.random_range(0..=max_len.min(64));
                random_seq(rng, len, alphabet)
            } else {
                let base = &bases[rng.random_range(0..families)];
                let rate = rng.random_range(0.0..0.08);
                mutate(rng, base, rate, alphabet, max_len)
            }
        })
        .collect();
    Collection::from_sequences(seqs).unwrap()
}

/// Clusters of mutated copies of cluster ancestors, which are themselves
/// mutated copies of one base string.
pub struct ClusterSpec {
    pub clusters: usize,
    pub per_cluster: usize,
    pub len: usize,
    /// Substitution rate of each member against its cluster ancestor.
    pub member_rate: f64,
    /// Pairwise divergence between cluster ancestors.
    pub cluster_divergence: f64,
}

impl ClusterSpec {
    pub fn desk_scale() -> Self {
        Self {
            clusters: 3,
            per_cluster: 10,
            len: 20_000,
            member_rate: 0.01,
            cluster_divergence: 0.15,
        }
    }

    /// Per-ancestor substitution rate `p` from the shared base so that two
    /// ancestors differ at `d = 2p - 4p^2/3` of positions (4 symbols).
    pub fn ancestor_rate(&self) -> f64 {
        let d = self.cluster_divergence;
        (2.0 - (4.0 - 16.0 * d / 3.0).sqrt()) / (8.0 / 3.0)
    }

    pub fn generate<R: Rng>(&self, rng: &mut R) -> (Collection, Vec<Vec<u8>>) {
        let base = random_seq(rng, self.len, DNA);
        let p = self.ancestor_rate();
        let ancestors: Vec<Vec<u8>> = (0..self.clusters).map(|_| substitute(rng, &base, p, DNA)).collect();
        let mut seqs = Vec::new();
        for a in &ancestors {
            for _ in 0..self.per_cluster {
                seqs.push(substitute(rng, a, self.member_rate, DNA));
            }
        }
        (Collection::from_sequences(seqs).unwrap(), ancestors)
    }
}

pub fn hamming_fraction(a: &[u8], b: &[u8]) -> f64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as f64 / a.len().max(1) as f64
}

/// Naive greedy phrase count: at each step, the longest prefix found by
/// scanning every reference position.
pub fn naive_greedy_count(reference: &[u8], target: &[u8]) -> usize {
    let mut pos = 0;
    let mut z = 0;
    while pos < target.len() {
        let rest = &target[pos..];
        let best = (0..reference.len())
            .map(|s| reference[s..].iter().zip(rest).take_while(|(a, b)| a == b).count())
            .max()
            .unwrap_or(0);
        pos += best.max(1);
        z += 1;
    }
    z
}

/// Minimum phrase count over all left-to-right factorizations into reference
/// substrings or single-byte literals.
pub fn dp_min_phrases(reference: &[u8], target: &[u8]) -> usize {
    let n = target.len();
    let mut best = vec![usize::MAX; n + 1];
    best[0] = 0;
    for i in 0..n {
        if best[i] == usize::MAX {
            continue;
        }
        best[i + 1] = best[i + 1].min(best[i] + 1);
        for j in i + 1..=n {
            let piece = &target[i..j];
            if !reference.windows(piece.len()).any(|w| w == piece) {
                break;
            }
            best[j] = best[j].min(best[i] + 1);
        }
    }
    best[n]
}

pub fn graph(m: usize, edges: &[(usize, usize, i64)]) -> CostGraph {
    CostGraph::new(m, edges.iter().map(|&(src, dst, weight)| Edge { src, dst, weight }))
}

pub fn strongly_connected_by_closure(m: usize, edges: &[(usize, usize, i64)]) -> bool {
    let mut reach = vec![vec![false; m]; m];
    for (v, row) in reach.iter_mut().enumerate() {
        row[v] = true;
    }
    for &(u, v, _) in edges {
        reach[u][v] = true;
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&r| r))
}

/// Random strongly connected digraph on `m` nodes with weights in `1..=20`.
pub fn random_strong_digraph<R: Rng>(rng: &mut R, m: usize) -> Vec<(usize, usize, i64)> {
    loop {
        let p = rng.random_range(0.2..0.9);
        let mut edges = Vec::new();
        for u in 0..m {
            for v in 0..m {
                if u != v && rng.random_bool(p) {
                    edges.push((u, v, rng.random_range(1..=20)));
                }
            }
        }
        if strongly_connected_by_closure(m, &edges) {
            return edges;
        }
    }
}

#[allow(clippy::needless_range_loop)]
/// Minimum of `root_cost(r) + tree weight` over every root and every parent
/// function, by exhaustive enumeration.
pub fn brute_force_mwsa(m: usize, edges: &[(usize, usize, i64)], root_costs: &[i64]) -> Option<i64> {
    let mut w = vec![vec![None; m]; m];
    for &(u, v, x) in edges {
        w[u][v] = Some(x);
    }
    let mut best: Option<i64> = None;
    for root in 0..m {
        let others: Vec<usize> = (0..m).filter(|&v| v != root).collect();
        let choices: Vec<Vec<usize>> = others
            .iter()
            .map(|&v| (0..m).filter(|&u| w[u][v].is_some()).collect())
            .collect();
        if choices.iter().any(Vec::is_empty) {
            continue;
        }
        let mut idx = vec![0usize; others.len()];
        loop {
            let mut parent = vec![usize::MAX; m];
            for (k, &v) in others.iter().enumerate() {
                parent[v] = choices[k][idx[k]];
            }
            let acyclic = others.iter().all(|&v| {
                let mut u = v;
                for _ in 0..m {
                    if u == root {
                        return true;
                    }
                    u = parent[u];
                }
                u == root
            });
            if acyclic {
                let total: i64 = others.iter().map(|&v| w[parent[v]][v].unwrap()).sum::<i64>() + root_costs[root];
                best = Some(best.map_or(total, |b| b.min(total)));
            }
            // Odometer increment.
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    best
}

/// Depth of every node by breadth-first search over a parent map.
pub fn bfs_depths(root: usize, parent: &[Option<usize>]) -> Vec<usize> {
    let m = parent.len();
    let mut adj = vec![Vec::new(); m];
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            adj[*p].push(v);
        }
    }
    let mut depth = vec![usize::MAX; m];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            depth[v] = depth[u] + 1;
            queue.push_back(v);
        }
    }
    depth
}

/// Reference queue: a plain list of actual values.
#[derive(Debug, Default, Clone)]
pub struct NaiveQueue {
    pub items: Vec<(i64, u64)>,
}

impl NaiveQueue {
    pub fn add(&mut self, delta: i64) {
        for item in &mut self.items {
            item.0 += delta;
        }
    }

    pub fn extract_min(&mut self) -> Option<(i64, u64)> {
        let (k, _) = self.items.iter().enumerate().min_by_key(|(_, x)| **x)?;
        Some(self.items.swap_remove(k))
    }
}
