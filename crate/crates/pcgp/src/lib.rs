//! Directed-graph products and the subtyping relations they generate.
//!
//! The central operation is the partial Cartesian graph product: a product
//! of two directed graphs in which only a chosen subset of the first
//! factor's vertices participates in pairing, while the remaining vertices
//! are carried over unchanged and stay connected the way they were. The
//! crate provides
//!
//! * the product in two equivalent constructions ([`products::pcgp`] and
//!   the coalescing [`products::gsp`]), plus the rival partial product
//!   [`products::yero`] for comparison,
//! * exact counting laws for the results and the machinery to certify the
//!   constructions against each other ([`analysis`]),
//! * a parser for a miniature generic-class declaration language
//!   ([`classdecl`]) and the iterative construction of the generic
//!   subtyping relation built on the product ([`subtyping`]),
//! * deterministic JSON and DOT emission ([`dot`] and the serde
//!   implementation on [`Digraph`]).
//!
//! The `pcgp` binary exposes all of it on the command line.

pub mod analysis;
pub mod classdecl;
pub mod dot;
pub mod graph;
pub mod products;
pub mod subtyping;

pub use analysis::{
    edge_count_forms, is_isomorphic, predicted_edge_count, predicted_vertex_count,
    random_digraph, transitive_reduction, CountReport,
};
pub use classdecl::{parse, subclassing_graph, ClassTable, ParseError};
pub use graph::{Digraph, EdgePartition, GraphError, Label};
pub use products::{gsp, pcgp, yero};
pub use subtyping::{
    check_nongeneric_preservation, containment_graph, subtyping_iterate, SubtypingError,
    SubtypingResult, TypeLabel, WildcardArg,
};
