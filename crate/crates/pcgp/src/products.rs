//! The three product operations on directed graphs.
//!
//! [`pcgp`] builds the partial Cartesian graph product constructively: the
//! Cartesian product of the product-vertex-induced subgraph with the second
//! factor, with the remaining subgraph attached through replicated cross
//! edges. [`gsp`] builds the same graph the other way around, by coalescing
//! copy-clusters of the full Cartesian product; for non-empty second factors
//! the two constructions produce label-identical graphs. [`yero`] is the
//! rival partial product that keeps all pairs as vertices and restricts one
//! edge class to a selected vertex set instead.

use std::collections::BTreeSet;

use crate::graph::{Digraph, GraphError, Label};

/// Partial Cartesian graph product of `g1` and `g2` relative to the product
/// vertices `vp` of `g1`.
///
/// Vertices are the pairs `(u, v)` for `u` in `vp`, `v` in `g2`, plus the
/// non-product vertices of `g1` unchanged. Every edge falls in exactly one
/// of four classes:
///
/// 1. Cartesian-product edges between pairs,
/// 2. `(u1, v) -> u2` for every product-to-non-product edge `u1 -> u2` of
///    `g1` and every vertex `v` of `g2`,
/// 3. `u1 -> (u2, v)` for every non-product-to-product edge, likewise
///    replicated over `g2`,
/// 4. edges between non-product vertices, kept as-is.
///
/// With `vp` equal to the whole vertex set this is the standard Cartesian
/// product; with `vp` empty it returns `g1` unchanged.
pub fn pcgp(g1: &Digraph, vp: &BTreeSet<Label>, g2: &Digraph) -> Result<Digraph, GraphError> {
    let part = g1.edge_partition(vp)?;
    let vn: BTreeSet<Label> = g1
        .vertices()
        .filter(|v| !vp.contains(*v))
        .cloned()
        .collect();
    let gp = g1.induced_subgraph(vp)?;
    let gn = g1.induced_subgraph(&vn)?;

    let base = gp.cartesian_product(g2).disjoint_union(&gn)?;

    let mut edges: BTreeSet<(Label, Label)> = base.edges().cloned().collect();
    for (u1, u2) in &part.e_pn {
        for v in g2.vertices() {
            edges.insert((Label::pair(u1, v), u2.clone()));
        }
    }
    for (u1, u2) in &part.e_np {
        for v in g2.vertices() {
            edges.insert((u1.clone(), Label::pair(u2, v)));
        }
    }
    Digraph::new(base.vertices().cloned(), edges)
}

/// Coalescing construction of the partial Cartesian graph product.
///
/// Computes the full Cartesian product `g1 x g2`, then merges each
/// non-product vertex's copy-cluster `{(u, v) : v in g2}` back into the
/// single vertex `u`. Intra-cluster edges become self-loops and are
/// discarded; parallel edges arising from the merge collapse into one.
///
/// For non-empty `g2` the result equals [`pcgp`] label-for-label. For an
/// empty `g2` there are no copies to merge and the result is the empty
/// graph (the constructive view returns the non-product subgraph instead).
pub fn gsp(g1: &Digraph, vp: &BTreeSet<Label>, g2: &Digraph) -> Result<Digraph, GraphError> {
    if let Some(missing) = vp.iter().find(|v| !g1.contains_vertex(v)) {
        return Err(GraphError::UnknownVertex(missing.clone()));
    }
    let full = g1.cartesian_product(g2);

    let merge = |label: &Label| -> Label {
        if let Label::Pair(u, _) = label {
            if !vp.contains(u) {
                return (**u).clone();
            }
        }
        label.clone()
    };

    let vertices: BTreeSet<Label> = full.vertices().map(merge).collect();
    let expected = vp.len() * g2.vertex_count()
        + if g2.vertex_count() == 0 {
            0
        } else {
            g1.vertex_count() - vp.len()
        };
    if vertices.len() != expected {
        // A non-product vertex label coincided with a product pair.
        let clash = g1
            .vertices()
            .find(|l| {
                !vp.contains(l)
                    && matches!(l, Label::Pair(u, v) if vp.contains(u) && g2.contains_vertex(v))
            })
            .cloned()
            .unwrap_or_else(|| Label::atom("?"));
        return Err(GraphError::LabelCollision(clash));
    }

    let edges = full
        .edges()
        .map(|(s, t)| (merge(s), merge(t)))
        .filter(|(s, t)| s != t);
    Digraph::new(vertices, edges)
}

/// The rival partial Cartesian product. The factor order mirrors the
/// partial product's: the selected set `s` is a subset of `g1`'s vertices
/// even though `g1` is the second factor here.
///
/// Vertices are all pairs `(a, u)` for `a` in `g2`, `u` in `g1`. There is an
/// edge `(a, u) -> (b, w)` iff `a = b` and `u -> w` is an edge of `g1`, or
/// `u = w` is in `s` and `a -> b` is an edge of `g2`. The vertex count is
/// always the full `|g2| * |g1|`; only the edges shrink with `s`.
pub fn yero(g2: &Digraph, s: &BTreeSet<Label>, g1: &Digraph) -> Result<Digraph, GraphError> {
    if let Some(missing) = s.iter().find(|v| !g1.contains_vertex(v)) {
        return Err(GraphError::UnknownVertex(missing.clone()));
    }
    let mut vertices = BTreeSet::new();
    for a in g2.vertices() {
        for u in g1.vertices() {
            vertices.insert(Label::pair(a, u));
        }
    }
    let mut edges = BTreeSet::new();
    // One copy of g1 per vertex of g2.
    for a in g2.vertices() {
        for (u, w) in g1.edges() {
            edges.insert((Label::pair(a, u), Label::pair(a, w)));
        }
    }
    // Copies of g2's edges only through the selected vertices.
    for u in s {
        for (a, b) in g2.edges() {
            edges.insert((Label::pair(a, u), Label::pair(b, u)));
        }
    }
    Digraph::new(vertices, edges)
}
