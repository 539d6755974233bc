//! Iterative construction of the generic subtyping relation.
//!
//! Starting from the one-vertex graph holding the default wildcard `?`, each
//! round derives the containment graph of wildcard type arguments over the
//! current subtyping graph and takes the partial Cartesian product of the
//! subclassing graph with it, relative to the set of generic classes:
//! generic classes become product vertices (paired with every argument),
//! non-generic classes survive unchanged. The relation is infinite in the
//! limit whenever at least one generic class exists; this module constructs
//! its finite unrollings.
//!
//! The exact containment relation between wildcard arguments is a pluggable
//! choice confined to [`containment_graph`]; the rule implemented here is
//! the standard Java-style one. Whether `? extends Object` is identified
//! with `?` is genuinely ambiguous, so both modes are supported through the
//! `identify_top` flag.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::analysis::{predicted_edge_count, predicted_vertex_count, reachability};
use crate::classdecl::{subclassing_graph, ClassTable, OBJECT};
use crate::graph::{Digraph, GraphError, Label};
use crate::products::pcgp;

/// Atom label of the default wildcard argument.
pub const DEFAULT_WILDCARD: &str = "?";
/// Reserved pair heads marking upper- and lower-bounded wildcards. Both are
/// keywords of the declaration language, so no class can collide with them.
const COVARIANT_HEAD: &str = "extends";
const CONTRAVARIANT_HEAD: &str = "super";

/// A use-site type argument: `?`, an invariant type, `? extends T` or
/// `? super T`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum WildcardArg {
    Default,
    Invariant(TypeLabel),
    Covariant(TypeLabel),
    Contravariant(TypeLabel),
}

/// A type: a non-generic class or a generic class applied to one wildcard
/// argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TypeLabel {
    NonGeneric(String),
    GenericApp(String, Box<WildcardArg>),
}

impl WildcardArg {
    /// The graph label this argument appears as in a containment graph.
    pub fn to_label(&self) -> Label {
        match self {
            WildcardArg::Default => Label::atom(DEFAULT_WILDCARD),
            WildcardArg::Invariant(t) => t.to_label(),
            WildcardArg::Covariant(t) => Label::pair(Label::atom(COVARIANT_HEAD), t.to_label()),
            WildcardArg::Contravariant(t) => {
                Label::pair(Label::atom(CONTRAVARIANT_HEAD), t.to_label())
            }
        }
    }

    /// Reads an argument back out of its graph label.
    pub fn from_label(label: &Label) -> Option<WildcardArg> {
        match label {
            Label::Atom(name) if name == DEFAULT_WILDCARD => Some(WildcardArg::Default),
            Label::Pair(head, t) if **head == Label::atom(COVARIANT_HEAD) => {
                Some(WildcardArg::Covariant(TypeLabel::from_label(t)?))
            }
            Label::Pair(head, t) if **head == Label::atom(CONTRAVARIANT_HEAD) => {
                Some(WildcardArg::Contravariant(TypeLabel::from_label(t)?))
            }
            other => Some(WildcardArg::Invariant(TypeLabel::from_label(other)?)),
        }
    }
}

impl TypeLabel {
    /// The graph label this type appears as in a subtyping graph.
    pub fn to_label(&self) -> Label {
        match self {
            TypeLabel::NonGeneric(name) => Label::atom(name),
            TypeLabel::GenericApp(name, arg) => Label::pair(Label::atom(name), arg.to_label()),
        }
    }

    /// Reads a type back out of its graph label.
    pub fn from_label(label: &Label) -> Option<TypeLabel> {
        match label {
            Label::Atom(name) if name != DEFAULT_WILDCARD => {
                Some(TypeLabel::NonGeneric(name.clone()))
            }
            Label::Pair(head, arg) => match &**head {
                Label::Atom(name) if name != COVARIANT_HEAD && name != CONTRAVARIANT_HEAD => {
                    Some(TypeLabel::GenericApp(
                        name.clone(),
                        Box::new(WildcardArg::from_label(arg)?),
                    ))
                }
                _ => None,
            },
            _ => None,
        }
    }
}

impl fmt::Display for WildcardArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WildcardArg::Default => write!(f, "?"),
            WildcardArg::Invariant(t) => write!(f, "{t}"),
            WildcardArg::Covariant(t) => write!(f, "? extends {t}"),
            WildcardArg::Contravariant(t) => write!(f, "? super {t}"),
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeLabel::NonGeneric(name) => write!(f, "{name}"),
            TypeLabel::GenericApp(name, arg) => write!(f, "{name}<{arg}>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubtypingError {
    #[error("depth 0 is undefined when generic classes are present; use a depth of at least 1")]
    DepthZeroWithGenerics,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The finite unrolling of a subtyping relation together with the recorded
/// per-round graphs and their sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtypingResult {
    /// The final round's subtyping graph.
    pub graph: Digraph,
    /// Number of product rounds taken.
    pub iteration: usize,
    /// `(vertices, edges)` of each round's graph, first round first.
    pub per_iteration_counts: Vec<(usize, usize)>,
    /// Every round's subtyping graph, first round first.
    pub stages: Vec<Digraph>,
}

/// The containment graph of wildcard type arguments over the subtyping
/// graph `s` (edges of `s` point subtype -> supertype; `s` must be a DAG).
///
/// Vertices: the default wildcard `?`, plus for every type `T` of `s` the
/// invariant argument `T`, the covariant `? extends T` and the
/// contravariant `? super T`. Directed edges mean "is contained in":
///
/// * `? extends T` -> `? extends U` whenever `U` is a proper supertype of
///   `T` (reachability in `s`, not just direct edges),
/// * `? super U` -> `? super T` likewise, with the direction flipped,
/// * `T` -> `? extends T` and `T` -> `? super T`,
/// * `? extends R` -> `?` for maximal types `R` and `? super B` -> `?` for
///   minimal types `B`, making `?` the unique sink.
///
/// With `identify_top` set and `s` having a unique top (a single maximal
/// type, `Object` in any subclassing-derived graph), `? extends Top` is
/// merged into `?` instead of ordering below it.
///
/// Applied to the empty graph this returns the one-vertex graph `{?}`,
/// which is the iteration's starting point.
pub fn containment_graph(s: &Digraph, identify_top: bool) -> Result<Digraph, SubtypingError> {
    let reach = reachability(s)?;
    let default = Label::atom(DEFAULT_WILDCARD);
    let covariant = |t: &Label| Label::pair(Label::atom(COVARIANT_HEAD), t);
    let contravariant = |t: &Label| Label::pair(Label::atom(CONTRAVARIANT_HEAD), t);

    let mut vertices: BTreeSet<Label> = BTreeSet::new();
    vertices.insert(default.clone());
    for t in s.vertices() {
        vertices.insert(t.clone());
        vertices.insert(covariant(t));
        vertices.insert(contravariant(t));
    }
    if vertices.len() != 1 + 3 * s.vertex_count() {
        // Some input label collides with the wildcard encoding.
        return Err(GraphError::LabelCollision(default).into());
    }

    let mut edges: BTreeSet<(Label, Label)> = BTreeSet::new();
    for t in s.vertices() {
        for u in &reach[t] {
            edges.insert((covariant(t), covariant(u)));
            edges.insert((contravariant(u), contravariant(t)));
        }
        edges.insert((t.clone(), covariant(t)));
        edges.insert((t.clone(), contravariant(t)));
        if s.successors(t).next().is_none() {
            edges.insert((covariant(t), default.clone()));
        }
        if s.predecessors(t).next().is_none() {
            edges.insert((contravariant(t), default.clone()));
        }
    }

    let mut graph = Digraph::new(vertices, edges)?;

    if identify_top {
        let mut sinks = s.vertices().filter(|t| s.successors(t).next().is_none());
        if let (Some(top), None) = (sinks.next(), sinks.next()) {
            let merged = covariant(top);
            let rename = |l: &Label| -> Label {
                if *l == merged {
                    default.clone()
                } else {
                    l.clone()
                }
            };
            graph = Digraph::new(
                graph.vertices().filter(|v| **v != merged).cloned(),
                graph
                    .edges()
                    .map(|(a, b)| (rename(a), rename(b)))
                    .filter(|(a, b)| a != b),
            )?;
        }
    }

    Ok(graph)
}

/// Runs `depth` rounds of the subtyping construction for the classes of
/// `table`, recording every intermediate graph and its counts.
///
/// Round zero's argument basis is the one-vertex default-wildcard graph;
/// each later round derives its basis as the containment graph of the
/// previous round's output. Counts are checked against the product
/// predictors every round.
///
/// `depth` 0 is only meaningful for tables without generic classes, where
/// the subtyping relation is the subclassing graph itself; with generic
/// classes present it is an error.
pub fn subtyping_iterate(
    table: &ClassTable,
    depth: usize,
    identify_top: bool,
) -> Result<SubtypingResult, SubtypingError> {
    let (class_graph, generic_set) = subclassing_graph(table);
    if depth == 0 {
        if generic_set.is_empty() {
            return Ok(SubtypingResult {
                graph: class_graph,
                iteration: 0,
                per_iteration_counts: Vec::new(),
                stages: Vec::new(),
            });
        }
        return Err(SubtypingError::DepthZeroWithGenerics);
    }

    let mut basis = Digraph::new([Label::atom(DEFAULT_WILDCARD)], [])
        .expect("the one-vertex wildcard graph is well formed");
    let mut stages: Vec<Digraph> = Vec::with_capacity(depth);
    let mut counts = Vec::with_capacity(depth);
    for round in 0..depth {
        let expect_v = predicted_vertex_count(&class_graph, &generic_set, &basis)?;
        let expect_e = predicted_edge_count(&class_graph, &generic_set, &basis)?;
        let next = pcgp(&class_graph, &generic_set, &basis)?;
        assert_eq!(
            (next.vertex_count(), next.edge_count()),
            (expect_v, expect_e),
            "product counts must satisfy the counting laws",
        );
        counts.push((next.vertex_count(), next.edge_count()));
        stages.push(next);
        if round + 1 < depth {
            basis = containment_graph(stages.last().expect("just pushed"), identify_top)?;
        }
    }

    Ok(SubtypingResult {
        graph: stages.last().expect("depth is at least one").clone(),
        iteration: depth,
        per_iteration_counts: counts,
        stages,
    })
}

/// True iff every non-generic class of the table (including `Object`)
/// appears as an atom vertex in every recorded round.
pub fn check_nongeneric_preservation(result: &SubtypingResult, table: &ClassTable) -> bool {
    let mut nongeneric = vec![Label::atom(OBJECT)];
    nongeneric.extend(
        table
            .decls()
            .iter()
            .filter(|d| !d.is_generic())
            .map(|d| Label::atom(&d.name)),
    );
    result
        .stages
        .iter()
        .all(|stage| nongeneric.iter().all(|class| stage.contains_vertex(class)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::transitive_reduction;
    use crate::classdecl::parse;

    fn cov(t: &Label) -> Label {
        Label::pair(Label::atom(COVARIANT_HEAD), t)
    }

    fn con(t: &Label) -> Label {
        Label::pair(Label::atom(CONTRAVARIANT_HEAD), t)
    }

    #[test]
    fn containment_over_empty_basis_is_the_default_wildcard() {
        let s0 = containment_graph(&Digraph::empty(), false).unwrap();
        assert_eq!(
            s0,
            Digraph::new([Label::atom(DEFAULT_WILDCARD)], []).unwrap()
        );
        // identify_top changes nothing without a top.
        assert_eq!(containment_graph(&Digraph::empty(), true).unwrap(), s0);
    }

    #[test]
    fn containment_over_single_type_with_identified_top() {
        let object = Label::atom("Object");
        let s = Digraph::new([object.clone()], []).unwrap();
        let g = containment_graph(&s, true).unwrap();
        let default = Label::atom(DEFAULT_WILDCARD);
        let expected = Digraph::new(
            [default.clone(), object.clone(), con(&object)],
            [
                (object.clone(), default.clone()),
                (object.clone(), con(&object)),
                (con(&object), default.clone()),
            ],
        )
        .unwrap();
        assert_eq!(g, expected);
    }

    #[test]
    fn containment_over_two_types_has_seven_vertices() {
        let c = Label::pair(Label::atom("C"), Label::atom(DEFAULT_WILDCARD));
        let object = Label::atom("Object");
        let s = Digraph::new(
            [c.clone(), object.clone()],
            [(c.clone(), object.clone())],
        )
        .unwrap();
        let g = containment_graph(&s, false).unwrap();
        assert_eq!(g.vertex_count(), 7);
        // Covariant follows subtyping, contravariant reverses it.
        assert!(g.contains_edge(&cov(&c), &cov(&object)));
        assert!(g.contains_edge(&con(&object), &con(&c)));
        // The default wildcard is the unique sink.
        let sinks: Vec<_> = g
            .vertices()
            .filter(|v| g.successors(v).next().is_none())
            .collect();
        assert_eq!(sinks, vec![&Label::atom(DEFAULT_WILDCARD)]);
    }

    #[test]
    fn containment_rejects_cyclic_input() {
        let s = Digraph::from_atoms(["A", "B"], [("A", "B"), ("B", "A")]).unwrap();
        assert!(matches!(
            containment_graph(&s, false),
            Err(SubtypingError::Graph(GraphError::CycleDetected(_)))
        ));
    }

    #[test]
    fn first_round_of_single_generic_class() {
        let table = parse("class C<T> {}").unwrap();
        let result = subtyping_iterate(&table, 1, false).unwrap();
        let c_default = Label::pair(Label::atom("C"), Label::atom(DEFAULT_WILDCARD));
        let expected = Digraph::new(
            [c_default.clone(), Label::atom("Object")],
            [(c_default.clone(), Label::atom("Object"))],
        )
        .unwrap();
        assert_eq!(result.graph, expected);
        assert_eq!(result.per_iteration_counts, vec![(2, 1)]);
        assert_eq!(
            TypeLabel::from_label(&c_default),
            Some(TypeLabel::GenericApp(
                "C".to_string(),
                Box::new(WildcardArg::Default)
            ))
        );
    }

    #[test]
    fn second_round_counts_follow_the_vertex_law() {
        let table = parse("class C<T> {}").unwrap();
        let result = subtyping_iterate(&table, 2, false).unwrap();
        // |S2| = |C_g| * |S1^t| + |C \ C_g| = 1*7 + 1.
        assert_eq!(result.graph.vertex_count(), 8);
        assert_eq!(result.iteration, 2);
        assert_eq!(result.stages.len(), 2);
    }

    #[test]
    fn depth_zero_without_generics_returns_subclassing_graph() {
        let table = parse("class A {} class B extends A {}").unwrap();
        let result = subtyping_iterate(&table, 0, false).unwrap();
        assert_eq!(
            result.graph,
            Digraph::from_atoms(["Object", "A", "B"], [("A", "Object"), ("B", "A")]).unwrap()
        );
        assert_eq!(result.iteration, 0);
    }

    #[test]
    fn depth_zero_with_generics_is_an_error() {
        let table = parse("class C<T> {}").unwrap();
        assert_eq!(
            subtyping_iterate(&table, 0, false).unwrap_err(),
            SubtypingError::DepthZeroWithGenerics
        );
    }

    #[test]
    fn every_round_is_a_dag_of_interpretable_types() {
        let table =
            parse("class A {} class B<T> extends A {} class C<U> extends B<A> {}").unwrap();
        for identify_top in [false, true] {
            let result = subtyping_iterate(&table, 3, identify_top).unwrap();
            for stage in &result.stages {
                assert!(transitive_reduction(stage).is_ok(), "round must be a DAG");
                for v in stage.vertices() {
                    assert!(
                        TypeLabel::from_label(v).is_some(),
                        "vertex {v} is not a type"
                    );
                }
            }
        }
    }

    #[test]
    fn rounds_grow_strictly_with_a_generic_class() {
        let table = parse("class A {} class B<T> {}").unwrap();
        let result = subtyping_iterate(&table, 4, true).unwrap();
        for pair in result.per_iteration_counts.windows(2) {
            assert!(pair[1].0 > pair[0].0);
        }
    }

    #[test]
    fn nongeneric_classes_survive_every_round() {
        let table = parse("class A {} class B<T> {}").unwrap();
        let result = subtyping_iterate(&table, 2, false).unwrap();
        assert!(check_nongeneric_preservation(&result, &table));
    }

    #[test]
    fn corrupted_result_fails_preservation() {
        let table = parse("class A {} class B<T> {}").unwrap();
        let mut result = subtyping_iterate(&table, 2, false).unwrap();
        // Drop the atom vertex for A from the final round.
        let broken = Digraph::new(
            result.graph.vertices().filter(|v| **v != Label::atom("A")).cloned(),
            result
                .graph
                .edges()
                .filter(|(s, t)| *s != Label::atom("A") && *t != Label::atom("A"))
                .cloned(),
        )
        .unwrap();
        result.stages.pop();
        result.stages.push(broken);
        assert!(!check_nongeneric_preservation(&result, &table));
    }

    #[test]
    fn type_labels_render_like_java() {
        let nested = TypeLabel::GenericApp(
            "C".to_string(),
            Box::new(WildcardArg::Covariant(TypeLabel::GenericApp(
                "C".to_string(),
                Box::new(WildcardArg::Default),
            ))),
        );
        assert_eq!(nested.to_string(), "C<? extends C<?>>");
        assert_eq!(TypeLabel::NonGeneric("Object".to_string()).to_string(), "Object");
        assert_eq!(
            WildcardArg::Contravariant(TypeLabel::NonGeneric("Object".to_string())).to_string(),
            "? super Object"
        );
    }

    #[test]
    fn label_embedding_round_trips() {
        let arg = WildcardArg::Covariant(TypeLabel::GenericApp(
            "C".to_string(),
            Box::new(WildcardArg::Contravariant(TypeLabel::NonGeneric(
                "Object".to_string(),
            ))),
        ));
        assert_eq!(WildcardArg::from_label(&arg.to_label()), Some(arg.clone()));
    }
}
