//! Deterministic DOT emission for GraphViz.
//!
//! Nodes and edges are written in canonical label order, so identical graphs
//! always produce byte-identical output. Callers choose how labels render:
//! the plain renderer shows pairs as `(u,v)`, the type renderer shows
//! Java-like type syntax for graphs whose vertices are embedded types.

use std::fmt::Write;

use crate::graph::{Digraph, Label};
use crate::subtyping::TypeLabel;

/// Renders a label the structural way: atoms by name, pairs as `(u,v)`.
pub fn plain_label(label: &Label) -> String {
    label.to_string()
}

/// Renders an embedded type label as Java-like syntax (`C<? extends D>`),
/// falling back to the structural rendering for labels that are not types.
pub fn type_label(label: &Label) -> String {
    match TypeLabel::from_label(label) {
        Some(t) => t.to_string(),
        None => label.to_string(),
    }
}

fn quote(text: &str) -> String {
    let escaped = text.replace('\\', "\\\\").replace('"', "\\\"");
    format!("\"{escaped}\"")
}

/// Writes the graph in DOT syntax using the given label renderer.
pub fn to_dot(graph: &Digraph, render: impl Fn(&Label) -> String) -> String {
    let mut out = String::from("digraph {\n");
    for v in graph.vertices() {
        let _ = writeln!(out, "  {};", quote(&render(v)));
    }
    for (src, dst) in graph.edges() {
        let _ = writeln!(out, "  {} -> {};", quote(&render(src)), quote(&render(dst)));
    }
    out.push_str("}\n");
    out
}
