//! Minimum weight spanning arborescences.
//!
//! Tarjan's contraction algorithm with one [`TwoLevelHeap`] of incoming edges
//! per (super) node. The root is chosen by the algorithm: a virtual root with
//! an edge to every node is added, and the costs on those edges are shifted
//! by a constant larger than any tree so that exactly one of them is used.

mod heap;

use std::collections::VecDeque;
use std::io::{self, Write};

pub use heap::TwoLevelHeap;

use crate::costgraph::CostGraph;
use crate::{Error, Result};

/// Rooted spanning tree over `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arborescence {
    pub root: usize,
    /// `parent[v]` is `None` exactly for the root.
    pub parent: Vec<Option<usize>>,
    /// Sum of the weights of the tree edges.
    pub weight: i64,
}

impl Arborescence {
    /// Star rooted at `root`: every other node hangs directly off it.
    pub fn star(m: usize, root: usize) -> Self {
        let parent = (0..m).map(|v| (v != root).then_some(root)).collect();
        Self { root, parent, weight: 0 }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Checks that the parent map is a tree rooted at `root` spanning all nodes.
    pub fn validate(&self) -> Result<()> {
        let m = self.parent.len();
        let bad = |msg: String| Err(Error::NotAnArborescence(msg));
        if self.root >= m {
            return bad(format!("root {} out of range", self.root));
        }
        for (v, p) in self.parent.iter().enumerate() {
            match *p {
                None if v != self.root => return bad(format!("node {v} has no parent")),
                Some(_) if v == self.root => return bad(format!("root {v} has a parent")),
                Some(p) if p >= m || p == v => return bad(format!("node {v} has invalid parent {p}")),
                _ => {}
            }
        }
        if bfs_order(self.root, &self.children()).len() != m {
            return bad("parent relation has a cycle".into());
        }
        Ok(())
    }

    /// Children of every node in ascending order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.parent.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(v);
            }
        }
        children
    }

    /// Breadth-first order from the root, children in ascending id order.
    pub fn bfs_order(&self) -> Vec<usize> {
        bfs_order(self.root, &self.children())
    }

    /// Edge count from the root to every node.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.parent.len()];
        for v in self.bfs_order() {
            if let Some(p) = self.parent[v] {
                depth[v] = depth[p] + 1;
            }
        }
        depth
    }

    /// Root cost plus tree weight.
    pub fn objective(&self, root_costs: &[i64]) -> i64 {
        root_costs[self.root] + self.weight
    }

    /// Writes `child parent weight` per node (0-based), `root -1 0` for the root.
    pub fn write_dump<W: Write>(&self, graph: &CostGraph, mut out: W) -> io::Result<()> {
        for (v, p) in self.parent.iter().enumerate() {
            match *p {
                None => writeln!(out, "{v} -1 0")?,
                Some(p) => writeln!(out, "{v} {p} {}", graph.weight(p, v).unwrap_or(0))?,
            }
        }
        out.flush()
    }
}

pub(crate) fn bfs_order(root: usize, children: &[Vec<usize>]) -> Vec<usize> {
    let mut seen = vec![false; children.len()];
    let mut order = Vec::with_capacity(children.len());
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &c in &children[u] {
            if !seen[c] {
                seen[c] = true;
                queue.push_back(c);
            }
        }
    }
    order
}

/// Minimum weight spanning arborescence over all choices of root.
pub fn mwsa(graph: &CostGraph) -> Result<Arborescence> {
    mwsa_virtual_root(graph, &vec![0; graph.node_count()])
}

/// Minimizes `root_costs[r] + tree weight` over all roots `r` and all
/// spanning arborescences rooted at `r`.
pub fn mwsa_virtual_root(graph: &CostGraph, root_costs: &[i64]) -> Result<Arborescence> {
    let m = graph.node_count();
    assert_eq!(root_costs.len(), m, "one root cost per node");
    assert!(m >= 1, "arborescence of an empty graph");
    if !graph.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    if m == 1 {
        return Ok(Arborescence { root: 0, parent: vec![None], weight: 0 });
    }

    // Any single-root tree is cheaper than any forest with two virtual edges.
    let spread = |it: &mut dyn Iterator<Item = i64>| it.fold(0i64, |s, w| s.saturating_add(w.saturating_abs()));
    let shift = spread(&mut graph.edges().iter().map(|e| e.weight))
        .saturating_add(spread(&mut root_costs.iter().copied()))
        .saturating_add(1);

    let virtual_root = m;
    // Sorted by (src, dst), so an edge index is also its tie-break rank.
    let mut edges: Vec<(usize, usize, i64)> = graph.edges().iter().map(|e| (e.src, e.dst, e.weight)).collect();
    edges.extend((0..m).map(|v| (virtual_root, v, root_costs[v] + shift)));

    let chosen = Contraction::new(m + 1, &edges).run(virtual_root)?;

    let mut parent = vec![None; m];
    let mut roots = Vec::new();
    let mut weight = 0;
    for (v, e) in chosen.into_iter().enumerate().take(m) {
        let (src, dst, w) = edges[e.expect("every non-root node has an entering edge")];
        debug_assert_eq!(dst, v);
        if src == virtual_root {
            roots.push(v);
        } else {
            parent[v] = Some(src);
            weight += w;
        }
    }
    assert_eq!(roots.len(), 1, "exactly one edge leaves the virtual root");
    Ok(Arborescence { root: roots[0], parent, weight })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Unvisited,
    OnPath,
    Done,
}

/// Contraction state over original nodes `0..n` and super nodes `n..`.
struct Contraction<'e> {
    n: usize,
    edges: &'e [(usize, usize, i64)],
    /// Union-find links; a super node's representative is itself.
    link: Vec<usize>,
    heaps: Vec<TwoLevelHeap<usize>>,
    status: Vec<Status>,
    in_edge: Vec<Option<usize>>,
    /// Cycle members of each contracted super node.
    members: Vec<Vec<usize>>,
    outer: Vec<Option<usize>>,
}

impl<'e> Contraction<'e> {
    fn new(n: usize, edges: &'e [(usize, usize, i64)]) -> Self {
        let mut incoming = vec![Vec::new(); n];
        for (k, &(_, dst, w)) in edges.iter().enumerate() {
            incoming[dst].push((w, k));
        }
        Self {
            n,
            edges,
            link: (0..n).collect(),
            heaps: incoming.into_iter().map(TwoLevelHeap::from_elements).collect(),
            status: vec![Status::Unvisited; n],
            in_edge: vec![None; n],
            members: vec![Vec::new(); n],
            outer: vec![None; n],
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.link[v] != v {
            self.link[v] = self.link[self.link[v]];
            v = self.link[v];
        }
        v
    }

    /// Returns the entering edge (index into `edges`) of every original node;
    /// `None` for the root.
    fn run(mut self, root: usize) -> Result<Vec<Option<usize>>> {
        self.status[root] = Status::Done;
        for start in 0..self.n {
            let mut node = self.find(start);
            if self.status[node] != Status::Unvisited {
                continue;
            }
            let mut path = Vec::new();
            loop {
                self.status[node] = Status::OnPath;
                path.push(node);
                let (value, e) = self.cheapest_entering(node)?;
                self.heaps[node].add(-value);
                self.in_edge[node] = Some(e);
                let from = self.find(self.edges[e].0);
                match self.status[from] {
                    Status::Done => {
                        for &p in &path {
                            self.status[p] = Status::Done;
                        }
                        break;
                    }
                    Status::Unvisited => node = from,
                    Status::OnPath => {
                        let at = path.iter().rposition(|&p| p == from).expect("on the path");
                        let cycle = path.split_off(at);
                        node = self.contract(cycle);
                    }
                }
            }
        }
        Ok(self.expand(root))
    }

    /// Pops entering edges until one comes from another super node; edges
    /// internal to a contracted cycle are discarded.
    fn cheapest_entering(&mut self, node: usize) -> Result<(i64, usize)> {
        loop {
            let (value, e) = self.heaps[node].extract_min().ok_or(Error::NotStronglyConnected)?;
            if self.find(self.edges[e].0) != node {
                return Ok((value, e));
            }
        }
    }

    fn contract(&mut self, cycle: Vec<usize>) -> usize {
        let x = self.link.len();
        self.link.push(x);
        self.status.push(Status::Unvisited);
        self.in_edge.push(None);
        self.outer.push(None);
        let mut heap = TwoLevelHeap::new();
        for &c in &cycle {
            self.link[c] = x;
            self.outer[c] = Some(x);
            heap.meld(std::mem::take(&mut self.heaps[c]));
        }
        self.heaps.push(heap);
        self.members.push(cycle);
        x
    }

    /// Unwinds the contractions: a cycle keeps the entering edges of all its
    /// members except the one entered from outside.
    fn expand(&self, root: usize) -> Vec<Option<usize>> {
        let total = self.link.len();
        // Leaf intervals of the contraction forest for O(1) containment tests.
        let mut lo = vec![0; total];
        let mut hi = vec![0; total];
        let mut leaf_pos = vec![0; self.n];
        let mut next = 0;
        for top in (0..total).filter(|&v| self.outer[v].is_none()) {
            let mut stack = vec![(top, false)];
            while let Some((v, closing)) = stack.pop() {
                if closing {
                    hi[v] = next;
                    continue;
                }
                lo[v] = next;
                if v < self.n {
                    leaf_pos[v] = next;
                    next += 1;
                    hi[v] = next;
                } else {
                    stack.push((v, true));
                    stack.extend(self.members[v].iter().map(|&c| (c, false)));
                }
            }
        }

        let mut enter: Vec<Option<usize>> = vec![None; total];
        for v in (0..total).rev() {
            if v == root {
                continue;
            }
            enter[v] = match self.outer[v] {
                None => self.in_edge[v],
                Some(x) => {
                    let from_outside = enter[x].expect("cycle entered");
                    let t = leaf_pos[self.edges[from_outside].1];
                    if lo[v] <= t && t < hi[v] {
                        Some(from_outside)
                    } else {
                        self.in_edge[v]
                    }
                }
            };
        }
        enter.truncate(self.n);
        enter
    }
}
