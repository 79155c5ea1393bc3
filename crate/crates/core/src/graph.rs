//! Complex-weighted graphs as Hermitian Hamiltonians.
//!
//! A [`WeightedGraph`] stores nodes, one complex amplitude per unordered node
//! pair, and real on-site energies. Each edge `(from, to, amp)` contributes
//! `amp |from><to| + conj(amp) |to><from|` to the Hamiltonian, so the induced
//! matrix is Hermitian by construction. Node order fixes matrix row order.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from graph construction, validation, and parsing.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("node label may not be empty")]
    EmptyLabel,
    #[error("duplicate node label `{0}`")]
    DuplicateNode(String),
    #[error("edge endpoint `{0}` is not a declared node")]
    UnknownEndpoint(String),
    #[error("duplicate edge between `{0}` and `{1}`")]
    DuplicateEdge(String, String),
    #[error("self-loop `{0}`-`{0}` must be a diagonal entry, not an edge")]
    SelfLoopAsEdge(String),
    #[error("duplicate diagonal entry for node `{0}`")]
    DuplicateDiagonal(String),
    #[error("graph has a diagonal entry on `{0}`; bipartiteness is defined for plain graphs")]
    HasDiagonal(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// A node label, unique within one graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(label: impl Into<String>) -> Self {
        NodeId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

/// One Hermitian pair of hopping terms: `amp |from><to| + conj(amp) |to><from|`.
///
/// `amp` is the matrix element `H[from, to]`; the arrow convention in figures
/// points from `from` to `to`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub amp: Complex64,
}

impl Edge {
    pub fn new(from: impl Into<NodeId>, to: impl Into<NodeId>, amp: Complex64) -> Self {
        Edge {
            from: from.into(),
            to: to.into(),
            amp,
        }
    }
}

/// A validated complex-weighted graph with real on-site energies.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
    diag: Vec<(NodeId, f64)>,
    index: HashMap<String, usize>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges && self.diag == other.diag
    }
}

/// Validates and builds a graph. Labels must be unique and non-empty, edge
/// endpoints declared, and at most one edge may join an unordered node pair.
pub fn build_graph(
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
    diag: Vec<(NodeId, f64)>,
) -> Result<WeightedGraph, GraphError> {
    let mut index = HashMap::with_capacity(nodes.len());
    for (i, node) in nodes.iter().enumerate() {
        if node.as_str().is_empty() {
            return Err(GraphError::EmptyLabel);
        }
        if index.insert(node.as_str().to_owned(), i).is_some() {
            return Err(GraphError::DuplicateNode(node.as_str().to_owned()));
        }
    }
    let mut seen_pairs = HashSet::new();
    for edge in &edges {
        let from = *index
            .get(edge.from.as_str())
            .ok_or_else(|| GraphError::UnknownEndpoint(edge.from.as_str().to_owned()))?;
        let to = *index
            .get(edge.to.as_str())
            .ok_or_else(|| GraphError::UnknownEndpoint(edge.to.as_str().to_owned()))?;
        if from == to {
            return Err(GraphError::SelfLoopAsEdge(edge.from.as_str().to_owned()));
        }
        let pair = (from.min(to), from.max(to));
        if !seen_pairs.insert(pair) {
            return Err(GraphError::DuplicateEdge(
                edge.from.as_str().to_owned(),
                edge.to.as_str().to_owned(),
            ));
        }
    }
    let mut seen_diag = HashSet::new();
    for (node, _) in &diag {
        if !index.contains_key(node.as_str()) {
            return Err(GraphError::UnknownEndpoint(node.as_str().to_owned()));
        }
        if !seen_diag.insert(node.as_str().to_owned()) {
            return Err(GraphError::DuplicateDiagonal(node.as_str().to_owned()));
        }
    }
    Ok(WeightedGraph {
        nodes,
        edges,
        diag,
        index,
    })
}

impl WeightedGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn diag(&self) -> &[(NodeId, f64)] {
        &self.diag
    }

    pub fn index_of(&self, node: &NodeId) -> Option<usize> {
        self.index.get(node.as_str()).copied()
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, node: &NodeId) -> bool {
        self.index.contains_key(node.as_str())
    }

    /// Diagonal energy on a node, zero when absent.
    pub fn diag_energy(&self, i: usize) -> f64 {
        let label = self.nodes[i].as_str();
        self.diag
            .iter()
            .find(|(n, _)| n.as_str() == label)
            .map(|(_, e)| *e)
            .unwrap_or(0.0)
    }

    /// Matrix element `H[i, j]` for `i != j`; zero when the pair is not joined.
    pub fn amp(&self, i: usize, j: usize) -> Complex64 {
        for edge in &self.edges {
            let from = self.index[edge.from.as_str()];
            let to = self.index[edge.to.as_str()];
            if from == i && to == j {
                return edge.amp;
            }
            if from == j && to == i {
                return edge.amp.conj();
            }
        }
        Complex64::new(0.0, 0.0)
    }

    /// Whether any edge joins nodes `i` and `j`.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.iter().any(|edge| {
            let from = self.index[edge.from.as_str()];
            let to = self.index[edge.to.as_str()];
            (from == i && to == j) || (from == j && to == i)
        })
    }

    /// Indices of nodes sharing an edge with node `i`.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for edge in &self.edges {
            let from = self.index[edge.from.as_str()];
            let to = self.index[edge.to.as_str()];
            if from == i {
                out.push(to);
            } else if to == i {
                out.push(from);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The dense Hermitian Hamiltonian in node order.
    pub fn hamiltonian(&self) -> DMatrix<Complex64> {
        let n = self.nodes.len();
        let mut h = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for edge in &self.edges {
            let from = self.index[edge.from.as_str()];
            let to = self.index[edge.to.as_str()];
            h[(from, to)] = edge.amp;
            h[(to, from)] = edge.amp.conj();
        }
        for (node, energy) in &self.diag {
            let i = self.index[node.as_str()];
            h[(i, i)] = Complex64::new(*energy, 0.0);
        }
        h
    }

    /// Largest absolute value of any Hamiltonian entry.
    pub fn max_abs_entry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for edge in &self.edges {
            m = m.max(edge.amp.norm());
        }
        for (_, e) in &self.diag {
            m = m.max(e.abs());
        }
        m
    }
}

/// The two node sets of a proper two-coloring.
pub type Bipartition = (BTreeSet<NodeId>, BTreeSet<NodeId>);

/// Two-colors the graph by breadth-first traversal, or returns `None` when an
/// odd cycle makes this impossible. The first node of each connected component
/// (in node order) goes to the first set. Graphs with diagonal entries are
/// rejected.
pub fn bipartite_partition(g: &WeightedGraph) -> Result<Option<Bipartition>, GraphError> {
    if let Some((node, _)) = g.diag.first() {
        return Err(GraphError::HasDiagonal(node.as_str().to_owned()));
    }
    let n = g.node_count();
    // color: None = unvisited, Some(false) = set A, Some(true) = set B
    let mut color: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::new();
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for v in g.neighbors(u) {
                match color[v] {
                    None => {
                        color[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return Ok(None),
                    Some(_) => {}
                }
            }
        }
    }
    let mut set_a = BTreeSet::new();
    let mut set_b = BTreeSet::new();
    for (i, c) in color.iter().enumerate() {
        match c {
            Some(false) => {
                set_a.insert(g.nodes[i].clone());
            }
            Some(true) => {
                set_b.insert(g.nodes[i].clone());
            }
            None => unreachable!("every node is visited"),
        }
    }
    Ok(Some((set_a, set_b)))
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    from: String,
    to: String,
    amp: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct DiagDoc {
    node: String,
    energy: f64,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    nodes: Vec<String>,
    edges: Vec<EdgeDoc>,
    diag: Vec<DiagDoc>,
}

/// Serializes a graph to its JSON document form.
pub fn graph_to_json(g: &WeightedGraph) -> String {
    let doc = GraphDoc {
        nodes: g.nodes.iter().map(|n| n.as_str().to_owned()).collect(),
        edges: g
            .edges
            .iter()
            .map(|e| EdgeDoc {
                from: e.from.as_str().to_owned(),
                to: e.to.as_str().to_owned(),
                amp: [e.amp.re, e.amp.im],
            })
            .collect(),
        diag: g
            .diag
            .iter()
            .map(|(n, e)| DiagDoc {
                node: n.as_str().to_owned(),
                energy: *e,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph document serialization cannot fail")
}

/// Parses and validates a graph from its JSON document form.
pub fn json_to_graph(text: &str) -> Result<WeightedGraph, GraphError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| GraphError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    build_graph(
        doc.nodes.into_iter().map(NodeId::from).collect(),
        doc.edges
            .into_iter()
            .map(|e| Edge::new(e.from, e.to, Complex64::new(e.amp[0], e.amp[1])))
            .collect(),
        doc.diag
            .into_iter()
            .map(|d| (NodeId::from(d.node), d.energy))
            .collect(),
    )
}
