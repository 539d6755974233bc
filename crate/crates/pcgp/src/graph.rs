//! Simple directed graphs with structured vertex labels.
//!
//! A [`Digraph`] is a finite set of [`Label`] vertices together with a set of
//! directed edges between them. Self-loops and parallel edges are rejected;
//! the empty graph is legal. Labels are either named atoms or ordered pairs
//! of labels, so iterated products keep full provenance of every vertex
//! without a separate relabeling table.
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A vertex identity: a named atom or an ordered pair of labels.
///
/// Atoms order before pairs; within each variant the ordering is
/// lexicographic. This gives every graph a canonical vertex order, which all
/// emitted artifacts rely on for reproducibility.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Atom(String),
    Pair(Box<Label>, Box<Label>),
}

impl Label {
    pub fn atom(name: impl Into<String>) -> Self {
        Label::Atom(name.into())
    }

    pub fn pair(left: impl Into<Label>, right: impl Into<Label>) -> Self {
        Label::Pair(Box::new(left.into()), Box::new(right.into()))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Label::Atom(_))
    }

    pub fn is_pair(&self) -> bool {
        matches!(self, Label::Pair(_, _))
    }

    /// True when every atom nested in this label has a non-empty name.
    fn is_well_formed(&self) -> bool {
        match self {
            Label::Atom(name) => !name.is_empty(),
            Label::Pair(l, r) => l.is_well_formed() && r.is_well_formed(),
        }
    }
}

impl From<&Label> for Label {
    fn from(l: &Label) -> Self {
        l.clone()
    }
}

impl From<&str> for Label {
    fn from(name: &str) -> Self {
        Label::Atom(name.to_string())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(name) => write!(f, "{name}"),
            Label::Pair(l, r) => write!(f, "({l},{r})"),
        }
    }
}

/// Errors raised by graph construction and the substrate operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("atom labels must have non-empty names")]
    EmptyAtomName,
    #[error("self-loop on vertex {0} is not allowed in a simple digraph")]
    SelfLoop(Label),
    #[error("edge endpoint {0} is not a vertex of the graph")]
    DanglingEndpoint(Label),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Label),
    #[error("vertex {0} appears in both operands of a disjoint union")]
    OverlappingVertex(Label),
    #[error("vertex labels collide after merging (offending label {0})")]
    LabelCollision(Label),
    #[error("graph has a cycle through vertex {0}")]
    CycleDetected(Label),
}

/// A simple directed graph over [`Label`] vertices.
///
/// Invariants enforced at construction: both endpoints of every edge are
/// vertices, no self-loops, no duplicate edges, and all atom names are
/// non-empty. Vertices and edges are stored in canonical sorted order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertices: BTreeSet<Label>,
    edges: BTreeSet<(Label, Label)>,
}

impl Default for Digraph {
    fn default() -> Self {
        Self::empty()
    }
}

impl Digraph {
    /// The graph with no vertices and no edges.
    pub fn empty() -> Self {
        Digraph {
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph from vertex and edge collections, validating the
    /// simple-digraph invariants. Duplicate vertices and edges collapse.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = Label>,
        E: IntoIterator<Item = (Label, Label)>,
    {
        let vertices: BTreeSet<Label> = vertices.into_iter().collect();
        for v in &vertices {
            if !v.is_well_formed() {
                return Err(GraphError::EmptyAtomName);
            }
        }
        let mut edge_set = BTreeSet::new();
        for (src, dst) in edges {
            if src == dst {
                return Err(GraphError::SelfLoop(src));
            }
            if !vertices.contains(&src) {
                return Err(GraphError::DanglingEndpoint(src));
            }
            if !vertices.contains(&dst) {
                return Err(GraphError::DanglingEndpoint(dst));
            }
            edge_set.insert((src, dst));
        }
        Ok(Digraph {
            vertices,
            edges: edge_set,
        })
    }

    /// Convenience constructor from string atoms.
    pub fn from_atoms<'a, V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = &'a str>,
        E: IntoIterator<Item = (&'a str, &'a str)>,
    {
        Digraph::new(
            vertices.into_iter().map(Label::atom),
            edges
                .into_iter()
                .map(|(s, t)| (Label::atom(s), Label::atom(t))),
        )
    }

    /// Number of vertices (the size of the graph).
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of edges (the order of the graph).
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: &Label) -> bool {
        self.vertices.contains(v)
    }

    pub fn contains_edge(&self, src: &Label, dst: &Label) -> bool {
        // Cheap membership probe without cloning into a tuple key.
        self.edges
            .iter()
            .any(|(s, t)| s == src && t == dst)
    }

    /// Vertices in canonical sorted order.
    pub fn vertices(&self) -> impl Iterator<Item = &Label> {
        self.vertices.iter()
    }

    /// Edges in canonical sorted order.
    pub fn edges(&self) -> impl Iterator<Item = &(Label, Label)> {
        self.edges.iter()
    }

    pub fn vertex_set(&self) -> &BTreeSet<Label> {
        &self.vertices
    }

    pub fn edge_set(&self) -> &BTreeSet<(Label, Label)> {
        &self.edges
    }

    /// Targets of edges leaving `v`.
    pub fn successors<'a>(&'a self, v: &'a Label) -> impl Iterator<Item = &'a Label> {
        self.edges
            .iter()
            .filter(move |(s, _)| s == v)
            .map(|(_, t)| t)
    }

    /// Sources of edges entering `v`.
    pub fn predecessors<'a>(&'a self, v: &'a Label) -> impl Iterator<Item = &'a Label> {
        self.edges
            .iter()
            .filter(move |(_, t)| t == v)
            .map(|(s, _)| s)
    }

    /// The subgraph induced by the vertex set `s`: vertices `s`, and every
    /// edge of this graph with both endpoints in `s`.
    pub fn induced_subgraph(&self, s: &BTreeSet<Label>) -> Result<Digraph, GraphError> {
        if let Some(missing) = s.iter().find(|v| !self.vertices.contains(*v)) {
            return Err(GraphError::UnknownVertex(missing.clone()));
        }
        let edges = self
            .edges
            .iter()
            .filter(|(src, dst)| s.contains(src) && s.contains(dst))
            .cloned()
            .collect();
        Ok(Digraph {
            vertices: s.clone(),
            edges,
        })
    }

    /// Splits this graph's edges four ways by endpoint membership in `vp`.
    pub fn edge_partition(&self, vp: &BTreeSet<Label>) -> Result<EdgePartition, GraphError> {
        if let Some(missing) = vp.iter().find(|v| !self.vertices.contains(*v)) {
            return Err(GraphError::UnknownVertex(missing.clone()));
        }
        let mut part = EdgePartition::default();
        for (src, dst) in &self.edges {
            let bucket = match (vp.contains(src), vp.contains(dst)) {
                (true, true) => &mut part.e_pp,
                (true, false) => &mut part.e_pn,
                (false, true) => &mut part.e_np,
                (false, false) => &mut part.e_nn,
            };
            bucket.insert((src.clone(), dst.clone()));
        }
        Ok(part)
    }

    /// The standard Cartesian graph product. Vertices are all pairs
    /// `(u, v)`; `(u1, v1) -> (u2, v2)` is an edge iff one coordinate is
    /// equal and the other is an edge of its factor.
    pub fn cartesian_product(&self, other: &Digraph) -> Digraph {
        let mut vertices = BTreeSet::new();
        for u in &self.vertices {
            for v in &other.vertices {
                vertices.insert(Label::pair(u, v));
            }
        }
        let mut edges = BTreeSet::new();
        // Fixed left coordinate, edge in the right factor.
        for u in &self.vertices {
            for (v1, v2) in &other.edges {
                edges.insert((Label::pair(u, v1), Label::pair(u, v2)));
            }
        }
        // Fixed right coordinate, edge in the left factor.
        for (u1, u2) in &self.edges {
            for v in &other.vertices {
                edges.insert((Label::pair(u1, v), Label::pair(u2, v)));
            }
        }
        Digraph { vertices, edges }
    }

    /// Union of two graphs with disjoint vertex sets.
    pub fn disjoint_union(&self, other: &Digraph) -> Result<Digraph, GraphError> {
        if let Some(shared) = self.vertices.intersection(&other.vertices).next() {
            return Err(GraphError::OverlappingVertex(shared.clone()));
        }
        let vertices = self.vertices.union(&other.vertices).cloned().collect();
        let edges = self.edges.union(&other.edges).cloned().collect();
        Ok(Digraph { vertices, edges })
    }
}

/// The four-way split of a graph's edges induced by a product-vertex set:
/// product-to-product, product-to-non-product, non-product-to-product and
/// non-product-to-non-product edges. The four sets are pairwise disjoint and
/// their union is the whole edge set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgePartition {
    pub e_pp: BTreeSet<(Label, Label)>,
    pub e_pn: BTreeSet<(Label, Label)>,
    pub e_np: BTreeSet<(Label, Label)>,
    pub e_nn: BTreeSet<(Label, Label)>,
}

impl EdgePartition {
    /// Total number of edges across the four classes.
    pub fn total(&self) -> usize {
        self.e_pp.len() + self.e_pn.len() + self.e_np.len() + self.e_nn.len()
    }

    /// Number of edges with at least one product endpoint.
    pub fn product_edge_count(&self) -> usize {
        self.e_pp.len() + self.e_pn.len() + self.e_np.len()
    }
}

/// Serialized form of the library-wide JSON graph format: an object with
/// sorted `vertices` and `edges` arrays. A label term is a string (atom) or
/// a two-element array (pair).
#[derive(Serialize, Deserialize)]
struct RawGraph {
    vertices: Vec<Label>,
    edges: Vec<(Label, Label)>,
}

impl TryFrom<RawGraph> for Digraph {
    type Error = GraphError;

    fn try_from(raw: RawGraph) -> Result<Self, Self::Error> {
        Digraph::new(raw.vertices, raw.edges)
    }
}

impl Serialize for Digraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = RawGraph {
            vertices: self.vertices.iter().cloned().collect(),
            edges: self.edges.iter().cloned().collect(),
        };
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawGraph::deserialize(deserializer)?;
        Digraph::try_from(raw).map_err(serde::de::Error::custom)
    }
}
