//! Shared helpers for the integration suites: seeded instance generators
//! and oracles that stay independent of the library's own algorithms.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pcgp::analysis::random_digraph;
use pcgp::graph::{Digraph, Label};

/// A seeded `(g1, vp, g2)` triple in the size range the property suites
/// use: `|V1| <= 6`, `|V2|` in `1..=4`, edge probability 0.4, and `vp` a
/// uniformly random subset of `g1`'s vertices.
pub fn seeded_triple(case_seed: u64) -> (Digraph, BTreeSet<Label>, Digraph) {
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
    let g1 = random_digraph(rng.gen_range(1..=6), 0.4, rng.gen());
    let g2 = random_digraph(rng.gen_range(1..=4), 0.4, rng.gen());
    let vp = g1
        .vertices()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    (g1, vp, g2)
}

/// Seeded DAG: a random digraph with every edge oriented along the
/// canonical vertex order.
pub fn seeded_dag(n: usize, p: f64, seed: u64) -> Digraph {
    let g = random_digraph(n, p, seed);
    let rank: BTreeMap<&Label, usize> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let edges: Vec<_> = g
        .edges()
        .filter(|(s, t)| rank[s] < rank[t])
        .cloned()
        .collect();
    Digraph::new(g.vertices().cloned(), edges).unwrap()
}

/// Reachability closure computed the slow, independent way: boolean matrix
/// plus Floyd-Warshall. Entry `[i][j]` is true iff `j` is reachable from
/// `i` through at least one edge.
pub fn closure_oracle(g: &Digraph) -> Vec<Vec<bool>> {
    let index: BTreeMap<&Label, usize> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let n = index.len();
    let mut reach = vec![vec![false; n]; n];
    for (s, t) in g.edges() {
        reach[index[s]][index[t]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    reach
}

/// Checks that `mapping` is a bijection from `g`'s vertices onto `h`'s that
/// preserves edges and non-edges in both directions.
pub fn verify_bijection(g: &Digraph, h: &Digraph, mapping: &BTreeMap<Label, Label>) -> bool {
    if mapping.len() != g.vertex_count() || g.vertex_count() != h.vertex_count() {
        return false;
    }
    let image: BTreeSet<&Label> = mapping.values().collect();
    if image.len() != mapping.len() || !image.iter().all(|v| h.contains_vertex(v)) {
        return false;
    }
    if !mapping.keys().all(|v| g.contains_vertex(v)) {
        return false;
    }
    for a in g.vertices() {
        for b in g.vertices() {
            let there = g.edges().any(|(s, t)| s == a && t == b);
            let back = h
                .edges()
                .any(|(s, t)| *s == mapping[a] && *t == mapping[b]);
            if there != back {
                return false;
            }
        }
    }
    true
}

/// Seeded source text for a class table with up to `max_classes` classes,
/// mixing generic and non-generic declarations. Superclasses only point at
/// earlier declarations, so the extends relation is always acyclic.
pub fn seeded_table_source(max_classes: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=max_classes);
    let mut generic = vec![false; count];
    for flag in generic.iter_mut() {
        *flag = rng.gen_bool(0.5);
    }
    // Keep the mix honest: at least one of each kind when there is room.
    generic[0] = false;
    if count > 1 && !generic.iter().any(|g| *g) {
        generic[count - 1] = true;
    }
    let mut source = String::new();
    for i in 0..count {
        source.push_str("class K");
        source.push_str(&i.to_string());
        if generic[i] {
            source.push_str("<T>");
        }
        if i > 0 && rng.gen_bool(0.7) {
            let parent = rng.gen_range(0..i);
            source.push_str(&format!(" extends K{parent}"));
            if generic[parent] {
                // Pass a non-generic class as the type argument.
                source.push_str("<K0>");
            }
        }
        source.push_str(" {}\n");
    }
    source
}
