//! Counting-law predictors, isomorphism checking, transitive reduction and
//! seeded random instance generation.
//!
//! The two predictors compute the exact vertex and edge counts of a partial
//! product without building it; they are laws, not bounds, and the property
//! suites hold them to zero tolerance.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{Digraph, GraphError, Label};

/// Predicted vs. actual size and order of a product graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub predicted_vertices: usize,
    pub predicted_edges: usize,
    pub actual_vertices: usize,
    pub actual_edges: usize,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl CountReport {
    pub fn new(
        predicted_vertices: usize,
        predicted_edges: usize,
        actual_vertices: usize,
        actual_edges: usize,
    ) -> Self {
        CountReport {
            predicted_vertices,
            predicted_edges,
            actual_vertices,
            actual_edges,
            matches: predicted_vertices == actual_vertices && predicted_edges == actual_edges,
        }
    }

    /// Compares the predictors against an actually constructed partial
    /// product of `g1` and `g2` relative to `vp`.
    pub fn for_partial_product(
        g1: &Digraph,
        vp: &BTreeSet<Label>,
        g2: &Digraph,
        actual: &Digraph,
    ) -> Result<Self, GraphError> {
        Ok(CountReport::new(
            predicted_vertex_count(g1, vp, g2)?,
            predicted_edge_count(g1, vp, g2)?,
            actual.vertex_count(),
            actual.edge_count(),
        ))
    }
}

/// Number of vertices of the partial Cartesian product: `|vp| * |g2|` plus
/// the number of non-product vertices.
pub fn predicted_vertex_count(
    g1: &Digraph,
    vp: &BTreeSet<Label>,
    g2: &Digraph,
) -> Result<usize, GraphError> {
    if let Some(missing) = vp.iter().find(|v| !g1.contains_vertex(v)) {
        return Err(GraphError::UnknownVertex(missing.clone()));
    }
    Ok(vp.len() * g2.vertex_count() + (g1.vertex_count() - vp.len()))
}

/// Both algebraic forms of the partial product's edge count.
///
/// With `e_p` the edges touching a product vertex and `e'_p` the edges
/// between non-product vertices, the direct form is
/// `(|vp| * e2 + e_p * v2) + e'_p` and the coalescing form is
/// `(|vp| * e2 + e1 * v2) - e'_p * (v2 - 1)`. The two are equal on every
/// input because `e1 = e_p + e'_p`.
pub fn edge_count_forms(
    g1: &Digraph,
    vp: &BTreeSet<Label>,
    g2: &Digraph,
) -> Result<(i64, i64), GraphError> {
    let part = g1.edge_partition(vp)?;
    let e_p = part.product_edge_count() as i64;
    let e_n = part.e_nn.len() as i64;
    let v2 = g2.vertex_count() as i64;
    let e2 = g2.edge_count() as i64;
    let e1 = g1.edge_count() as i64;
    let vp_size = vp.len() as i64;

    let direct = vp_size * e2 + e_p * v2 + e_n;
    let coalesced = (vp_size * e2 + e1 * v2) - e_n * (v2 - 1);
    Ok((direct, coalesced))
}

/// Number of edges of the partial Cartesian product. Evaluates both
/// algebraic forms of the count and asserts they agree.
pub fn predicted_edge_count(
    g1: &Digraph,
    vp: &BTreeSet<Label>,
    g2: &Digraph,
) -> Result<usize, GraphError> {
    let (direct, coalesced) = edge_count_forms(g1, vp, g2)?;
    assert_eq!(direct, coalesced, "the two edge-count forms must agree");
    Ok(direct as usize)
}

/// Searches for a digraph isomorphism between `g` and `h`.
///
/// Returns a bijection on vertex labels that preserves edges in both
/// directions, or `None` if the graphs are not isomorphic. The search is a
/// backtracking match over canonically ordered vertices with in/out-degree
/// pruning; deterministic, and practical for the instance sizes used here
/// (tens of vertices), though not for large graphs.
pub fn is_isomorphic(g: &Digraph, h: &Digraph) -> Option<BTreeMap<Label, Label>> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }

    let g_vertices: Vec<&Label> = g.vertices().collect();
    let h_vertices: Vec<&Label> = h.vertices().collect();
    let n = g_vertices.len();
    if n == 0 {
        return Some(BTreeMap::new());
    }

    let adjacency = |graph: &Digraph, vertices: &[&Label]| -> Vec<Vec<bool>> {
        let index: BTreeMap<&Label, usize> =
            vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut adj = vec![vec![false; vertices.len()]; vertices.len()];
        for (s, t) in graph.edges() {
            adj[index[s]][index[t]] = true;
        }
        adj
    };
    let g_adj = adjacency(g, &g_vertices);
    let h_adj = adjacency(h, &h_vertices);

    let signature = |adj: &[Vec<bool>], i: usize| -> (usize, usize) {
        let out = adj[i].iter().filter(|b| **b).count();
        let inn = adj.iter().filter(|row| row[i]).count();
        (out, inn)
    };
    let g_sig: Vec<(usize, usize)> = (0..n).map(|i| signature(&g_adj, i)).collect();
    let h_sig: Vec<(usize, usize)> = (0..n).map(|i| signature(&h_adj, i)).collect();

    let mut g_profile = g_sig.clone();
    let mut h_profile = h_sig.clone();
    g_profile.sort_unstable();
    h_profile.sort_unstable();
    if g_profile != h_profile {
        return None;
    }

    // Candidate sets by degree signature; most-constrained vertices first.
    let candidates_for = |i: usize| -> Vec<usize> {
        let mut cands: Vec<usize> = (0..n).filter(|&j| h_sig[j] == g_sig[i]).collect();
        // Trying the equally-labeled vertex first finds the identity
        // mapping immediately when the graphs coincide.
        cands.sort_by_key(|&j| (h_vertices[j] != g_vertices[i], j));
        cands
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| {
        let breadth = (0..n).filter(|&j| h_sig[j] == g_sig[i]).count();
        (breadth, std::cmp::Reverse(g_sig[i].0 + g_sig[i].1), i)
    });

    let mut mapping: Vec<Option<usize>> = vec![None; n];
    let mut used: Vec<bool> = vec![false; n];

    fn consistent(
        g_adj: &[Vec<bool>],
        h_adj: &[Vec<bool>],
        mapping: &[Option<usize>],
        placed: &[usize],
        i: usize,
        j: usize,
    ) -> bool {
        for &k in placed {
            let m = match mapping[k] {
                Some(m) => m,
                None => continue,
            };
            if g_adj[i][k] != h_adj[j][m] || g_adj[k][i] != h_adj[m][j] {
                return false;
            }
        }
        true
    }

    fn search(
        g_adj: &[Vec<bool>],
        h_adj: &[Vec<bool>],
        order: &[usize],
        depth: usize,
        candidates_for: &dyn Fn(usize) -> Vec<usize>,
        mapping: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let i = order[depth];
        let placed = &order[..depth];
        for j in candidates_for(i) {
            if used[j] {
                continue;
            }
            if !consistent(g_adj, h_adj, mapping, placed, i, j) {
                continue;
            }
            mapping[i] = Some(j);
            used[j] = true;
            if search(g_adj, h_adj, order, depth + 1, candidates_for, mapping, used) {
                return true;
            }
            mapping[i] = None;
            used[j] = false;
        }
        false
    }

    if !search(
        &g_adj,
        &h_adj,
        &order,
        0,
        &candidates_for,
        &mut mapping,
        &mut used,
    ) {
        return None;
    }

    Some(
        mapping
            .iter()
            .enumerate()
            .map(|(i, j)| (g_vertices[i].clone(), h_vertices[j.unwrap()].clone()))
            .collect(),
    )
}

/// Topological order of a DAG's vertices, or the cycle error.
pub(crate) fn topological_sort(g: &Digraph) -> Result<Vec<Label>, GraphError> {
    let mut indegree: BTreeMap<&Label, usize> = g.vertices().map(|v| (v, 0)).collect();
    for (_, dst) in g.edges() {
        *indegree.get_mut(dst).expect("endpoint is a vertex") += 1;
    }
    let mut frontier: BTreeSet<&Label> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(v, _)| *v)
        .collect();
    let mut order = Vec::with_capacity(g.vertex_count());
    while let Some(&v) = frontier.iter().next() {
        frontier.remove(v);
        order.push(v.clone());
        for w in g.successors(v) {
            let d = indegree.get_mut(w).expect("endpoint is a vertex");
            *d -= 1;
            if *d == 0 {
                frontier.insert(w);
            }
        }
    }
    if order.len() != g.vertex_count() {
        let on_cycle = indegree
            .iter()
            .filter(|(_, d)| **d > 0)
            .map(|(v, _)| (*v).clone())
            .next()
            .expect("some vertex remains on a cycle");
        return Err(GraphError::CycleDetected(on_cycle));
    }
    Ok(order)
}

/// Vertices strictly reachable from each vertex (one or more edges).
pub(crate) fn reachability(g: &Digraph) -> Result<BTreeMap<Label, BTreeSet<Label>>, GraphError> {
    let order = topological_sort(g)?;
    let mut reach: BTreeMap<Label, BTreeSet<Label>> = BTreeMap::new();
    for v in order.iter().rev() {
        let mut set = BTreeSet::new();
        for w in g.successors(v) {
            set.insert(w.clone());
            set.extend(reach[w].iter().cloned());
        }
        reach.insert(v.clone(), set);
    }
    Ok(reach)
}

/// The unique minimal edge subset of a DAG with the same reachability
/// relation. Rejects cyclic input.
pub fn transitive_reduction(g: &Digraph) -> Result<Digraph, GraphError> {
    let reach = reachability(g)?;
    let edges = g.edges().filter(|(u, v)| {
        // Keep u -> v unless v is also reachable through some other
        // successor of u.
        !g.successors(u)
            .any(|w| w != v && reach[w].contains(v))
    });
    Digraph::new(g.vertices().cloned(), edges.cloned())
}

/// Seeded Erdos-Renyi style digraph on `n` atom vertices `v0 .. v{n-1}`.
/// Each ordered non-loop pair becomes an edge independently with the given
/// probability. Identical arguments produce identical graphs.
///
/// Panics if `edge_probability` is outside `[0, 1]`.
pub fn random_digraph(n: usize, edge_probability: f64, seed: u64) -> Digraph {
    assert!(
        (0.0..=1.0).contains(&edge_probability),
        "edge probability must lie in [0, 1], got {edge_probability}"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<Label> = (0..n).map(|i| Label::atom(format!("v{i}"))).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(edge_probability) {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    Digraph::new(names, edges).expect("generated graph is simple by construction")
}
