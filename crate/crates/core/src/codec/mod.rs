//! Compression pipelines, decompression and archive statistics.

mod format;

use std::collections::BTreeMap;

use rayon::prelude::*;

pub use format::{deserialize, serialize, write_varint, MAGIC, VERSION};

use crate::arborescence::{mwsa, mwsa_virtual_root, Arborescence};
use crate::corpus::{generated_names, Collection, Format};
use crate::costgraph::{complete_cost_graph, sparse_cost_graph_traced, CostGraph, LshParams, SparseTrace};
use crate::parse::{decode_into, greedy_parse, Matcher, Parsing};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every sequence parsed against one reference.
    Rlz,
    /// Every sequence parsed against its parent in a tree.
    Hrlz,
}

/// Compressed collection. Node `v` is the sequence at 0-based index `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Archive {
    pub mode: Mode,
    pub root: usize,
    /// Parent of every node; `None` for the root. A star for [`Mode::Rlz`].
    pub parent: Vec<Option<usize>>,
    /// Record names, kept only for FASTA input.
    pub names: Option<Vec<Vec<u8>>>,
    pub trailing_newline: bool,
    pub root_sequence: Vec<u8>,
    /// Parsing of every node against its parent; empty for the root.
    pub parsings: Vec<Parsing>,
}

impl Archive {
    /// Number of sequences, `m`.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn tree(&self) -> Arborescence {
        Arborescence {
            root: self.root,
            parent: self.parent.clone(),
            weight: self.total_phrases() as i64,
        }
    }

    /// Sum of phrase counts over non-root nodes (`z_H`, or `z_R` for RLZ).
    pub fn total_phrases(&self) -> usize {
        self.parsings.iter().map(Parsing::len).sum()
    }

    /// Order in which nodes are materialized: BFS from the root, children in
    /// ascending id order. Every parent precedes its children.
    pub fn decode_order(&self) -> Vec<usize> {
        self.tree().bfs_order()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        serialize(self)
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self> {
        deserialize(data)
    }
}

/// Whether the cost of storing the root verbatim enters tree selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootCost {
    #[default]
    Ignore,
    /// Charge `|S_r|` for choosing `r` as root.
    SequenceLength,
}

/// An archive together with the graph and tree it was built from.
#[derive(Debug, Clone)]
pub struct Compression {
    pub archive: Archive,
    pub graph: CostGraph,
    pub tree: Arborescence,
    pub trace: Option<SparseTrace>,
}

pub fn compress_rlz(collection: &Collection, reference: usize) -> Result<Archive> {
    let m = collection.len();
    if reference >= m {
        return Err(Error::ReferenceOutOfRange { reference, m });
    }
    let mut archive = compress_hrlz(collection, &Arborescence::star(m, reference))?;
    archive.mode = Mode::Rlz;
    Ok(archive)
}

/// Parses every non-root node against its parent in `tree`. Nodes sharing a
/// parent share one matcher; parents are processed in parallel.
pub fn compress_hrlz(collection: &Collection, tree: &Arborescence) -> Result<Archive> {
    let m = collection.len();
    if tree.len() != m {
        return Err(Error::NotAnArborescence(format!(
            "tree has {} nodes, collection has {m}",
            tree.len()
        )));
    }
    tree.validate()?;

    let mut by_parent: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, p) in tree.parent.iter().enumerate() {
        if let Some(p) = *p {
            by_parent.entry(p).or_default().push(v);
        }
    }
    let groups: Vec<(usize, Vec<usize>)> = by_parent.into_iter().collect();
    let parsed: Vec<(usize, Parsing)> = groups
        .par_iter()
        .flat_map_iter(|(p, children)| {
            let matcher = Matcher::new(collection.sequence(*p));
            children
                .iter()
                .map(|&v| (v, greedy_parse(&matcher, collection.sequence(v))))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut parsings = vec![Parsing::default(); m];
    for (v, parsing) in parsed {
        parsings[v] = parsing;
    }

    Ok(Archive {
        mode: Mode::Hrlz,
        root: tree.root,
        parent: tree.parent.clone(),
        names: (collection.format() == Format::Fasta).then(|| collection.names().to_vec()),
        trailing_newline: collection.trailing_newline(),
        root_sequence: collection.sequence(tree.root).to_vec(),
        parsings,
    })
}

fn tree_for(collection: &Collection, graph: &CostGraph, root_cost: RootCost) -> Arborescence {
    let tree = match root_cost {
        RootCost::Ignore => mwsa(graph),
        RootCost::SequenceLength => {
            let costs: Vec<i64> = collection.sequences().iter().map(|s| s.len() as i64).collect();
            mwsa_virtual_root(graph, &costs)
        }
    };
    tree.expect("cost graph is strongly connected by construction")
}

/// Complete cost graph, its minimum arborescence, and the HRLZ archive.
pub fn optimal_pipeline(collection: &Collection, root_cost: RootCost) -> Compression {
    let graph = complete_cost_graph(collection);
    let tree = tree_for(collection, &graph, root_cost);
    let archive = compress_hrlz(collection, &tree).expect("minimum arborescence is a valid tree");
    Compression { archive, graph, tree, trace: None }
}

/// Same as [`optimal_pipeline`] on the LSH-sparsified cost graph.
pub fn approx_pipeline(collection: &Collection, params: &LshParams, root_cost: RootCost) -> Compression {
    let (graph, trace) = sparse_cost_graph_traced(collection, params);
    let tree = tree_for(collection, &graph, root_cost);
    let archive = compress_hrlz(collection, &tree).expect("minimum arborescence is a valid tree");
    Compression { archive, graph, tree, trace: Some(trace) }
}

pub fn compress_optimal(collection: &Collection, root_cost: RootCost) -> Archive {
    optimal_pipeline(collection, root_cost).archive
}

pub fn compress_approx(collection: &Collection, params: &LshParams, root_cost: RootCost) -> Archive {
    approx_pipeline(collection, params, root_cost).archive
}

/// Rebuilds the collection, decoding each node after its parent.
pub fn decompress(archive: &Archive) -> Result<Collection> {
    let m = archive.len();
    let bad = |msg: String| Error::CorruptArchive(msg);
    if m == 0 || archive.parsings.len() != m {
        return Err(bad("node count mismatch".into()));
    }
    let tree = archive.tree();
    tree.validate().map_err(|e| bad(e.to_string()))?;
    if !archive.parsings[archive.root].is_empty() {
        return Err(bad("root has a parsing".into()));
    }

    let mut decoded: Vec<Option<Vec<u8>>> = vec![None; m];
    decoded[archive.root] = Some(archive.root_sequence.clone());
    for v in tree.bfs_order().into_iter().skip(1) {
        let parent = archive.parent[v].expect("non-root");
        let reference = decoded[parent].as_deref().expect("BFS decodes parents first");
        let parsing = &archive.parsings[v];
        if !parsing.fits(reference.len()) {
            return Err(bad(format!("node {v}: phrase outside parent of length {}", reference.len())));
        }
        let mut out = Vec::with_capacity(parsing.target_len());
        decode_into(reference, parsing, &mut out).map_err(|e| bad(format!("node {v}: {e}")))?;
        decoded[v] = Some(out);
    }

    let sequences = decoded.into_iter().map(|s| s.expect("tree spans all nodes")).collect();
    let (names, format) = match &archive.names {
        Some(names) if names.len() == m => (names.clone(), Format::Fasta),
        Some(_) => return Err(bad("name count mismatch".into())),
        None => (generated_names(m), Format::Lines),
    };
    Collection::new(names, sequences, format, archive.trailing_newline)
}

/// Phrase counts and tree shape of an archive.
#[derive(Debug, Clone, PartialEq)]
pub struct Stats {
    pub mode: Mode,
    pub total_phrases: usize,
    /// Phrase count per node; 0 for the root.
    pub phrases: Vec<usize>,
    /// Depth per node; 0 for the root.
    pub depths: Vec<usize>,
    pub avg_depth: f64,
    pub max_depth: usize,
}

impl Stats {
    pub const SUMMARY_HEADER: &'static str = "mode,sequences,phrases,max_depth,avg_depth";

    pub fn sequences(&self) -> usize {
        self.depths.len()
    }

    /// Summary row matching [`Stats::SUMMARY_HEADER`].
    pub fn summary_row(&self) -> String {
        let mode = match self.mode {
            Mode::Rlz => "rlz",
            Mode::Hrlz => "hrlz",
        };
        format!(
            "{mode},{},{},{},{:.6}",
            self.sequences(),
            self.total_phrases,
            self.max_depth,
            self.avg_depth
        )
    }
}

pub fn stats(archive: &Archive) -> Stats {
    let depths = archive.tree().depths();
    let max_depth = depths.iter().copied().max().unwrap_or(0);
    let avg_depth = depths.iter().sum::<usize>() as f64 / depths.len().max(1) as f64;
    let phrases: Vec<usize> = archive.parsings.iter().map(Parsing::len).collect();
    Stats {
        mode: archive.mode,
        total_phrases: phrases.iter().sum(),
        phrases,
        depths,
        avg_depth,
        max_depth,
    }
}
