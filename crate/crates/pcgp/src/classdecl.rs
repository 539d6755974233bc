//! Parser for a miniature generic-class declaration language.
//!
//! The grammar covers exactly what the subtyping constructor needs:
//!
//! ```text
//! program := decl*
//! decl    := "class" IDENT ("<" IDENT ">")? ("extends" IDENT ("<" ARG ">")?)? "{" "}"
//! ARG     := IDENT   -- the declared type parameter or a non-generic class name
//! ```
//!
//! Class bodies must be empty (members are irrelevant to subtyping). The
//! root class `Object` is implicit and always present; classes without an
//! `extends` clause extend `Object`. Classes may reference later-declared
//! classes; resolution happens in a second pass.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Digraph, Label};

/// Name of the implicit root class.
pub const OBJECT: &str = "Object";

/// A superclass type argument: the declaring class's type parameter or a
/// non-generic class name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArgTerm {
    TypeParam(String),
    Class(String),
}

impl fmt::Display for ArgTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgTerm::TypeParam(name) | ArgTerm::Class(name) => write!(f, "{name}"),
        }
    }
}

/// A resolved `extends` clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperRef {
    pub name: String,
    pub super_arg: Option<ArgTerm>,
}

/// One parsed class declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub type_param: Option<String>,
    pub superclass: Option<SuperRef>,
}

impl ClassDecl {
    pub fn is_generic(&self) -> bool {
        self.type_param.is_some()
    }

    /// Name of the direct superclass (`Object` when no extends clause).
    pub fn super_name(&self) -> &str {
        self.superclass.as_ref().map_or(OBJECT, |s| s.name.as_str())
    }
}

/// All declarations of a program, in source order, plus the implicit root
/// class `Object`. Superclass references are resolved and the extends
/// relation is known to be acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTable {
    decls: Vec<ClassDecl>,
}

impl ClassTable {
    /// Declared classes in source order (`Object` is implicit, not listed).
    pub fn decls(&self) -> &[ClassDecl] {
        &self.decls
    }

    pub fn get(&self, name: &str) -> Option<&ClassDecl> {
        self.decls.iter().find(|d| d.name == name)
    }

    /// True for every declared class and for `Object`.
    pub fn contains(&self, name: &str) -> bool {
        name == OBJECT || self.get(name).is_some()
    }

    pub fn is_generic(&self, name: &str) -> bool {
        self.get(name).is_some_and(|d| d.is_generic())
    }

    /// Canonical source text; parsing it yields this table back.
    pub fn pretty_print(&self) -> String {
        let mut out = String::new();
        for decl in &self.decls {
            out.push_str("class ");
            out.push_str(&decl.name);
            if let Some(param) = &decl.type_param {
                let _ = write!(out, "<{param}>");
            }
            if let Some(sup) = &decl.superclass {
                let _ = write!(out, " extends {}", sup.name);
                if let Some(arg) = &sup.super_arg {
                    let _ = write!(out, "<{arg}>");
                }
            }
            out.push_str(" {}\n");
        }
        out
    }
}

/// Errors from parsing and resolving class declarations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{col}: duplicate class name `{name}`")]
    DuplicateClass { name: String, line: usize, col: usize },
    #[error("class `{class}` extends unknown class `{superclass}`")]
    UnknownSuperclass { class: String, superclass: String },
    #[error("cyclic extends chain through class `{0}`")]
    CyclicExtends(String),
    #[error("class `{class}` passes a type argument to non-generic superclass `{superclass}`")]
    SuperArgOnNonGeneric { class: String, superclass: String },
    #[error("class `{class}`: super argument `{arg}` is neither the declared type parameter nor a non-generic class")]
    UnknownSuperArg { class: String, arg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Class,
    Extends,
    Super,
    Ident(String),
    Lt,
    Gt,
    LBrace,
    RBrace,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Class => write!(f, "`class`"),
            Token::Extends => write!(f, "`extends`"),
            Token::Super => write!(f, "`super`"),
            Token::Ident(name) => write!(f, "identifier `{name}`"),
            Token::Lt => write!(f, "`<`"),
            Token::Gt => write!(f, "`>`"),
            Token::LBrace => write!(f, "`{{`"),
            Token::RBrace => write!(f, "`}}`"),
            Token::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    line: usize,
    col: usize,
}

fn tokenize(source: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = source.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tok_line, tok_col) = (line, col);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        let token = match c {
            '<' => {
                advance(&mut chars);
                Token::Lt
            }
            '>' => {
                advance(&mut chars);
                Token::Gt
            }
            '{' => {
                advance(&mut chars);
                Token::LBrace
            }
            '}' => {
                advance(&mut chars);
                Token::RBrace
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        word.push(advance(&mut chars));
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "class" => Token::Class,
                    "extends" => Token::Extends,
                    // Reserved so class names stay distinct from wildcard
                    // bound syntax.
                    "super" => Token::Super,
                    _ => Token::Ident(word),
                }
            }
            other => {
                return Err(ParseError::Syntax {
                    line: tok_line,
                    col: tok_col,
                    expected: "a declaration".to_string(),
                    found: format!("`{other}`"),
                })
            }
        };
        tokens.push(Spanned {
            token,
            line: tok_line,
            col: tok_col,
        });
    }
    tokens.push(Spanned {
        token: Token::Eof,
        line,
        col,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let at = self.peek();
        ParseError::Syntax {
            line: at.line,
            col: at.col,
            expected: expected.to_string(),
            found: at.token.to_string(),
        }
    }

    fn expect(&mut self, token: Token, expected: &str) -> Result<Spanned, ParseError> {
        if self.peek().token == token {
            Ok(self.bump())
        } else {
            Err(self.error(expected))
        }
    }

    fn expect_ident(&mut self, expected: &str) -> Result<(String, usize, usize), ParseError> {
        match self.peek().token.clone() {
            Token::Ident(name) => {
                let at = self.bump();
                Ok((name, at.line, at.col))
            }
            _ => Err(self.error(expected)),
        }
    }

    fn decl(&mut self) -> Result<(ClassDecl, usize, usize), ParseError> {
        self.expect(Token::Class, "`class`")?;
        let (name, line, col) = self.expect_ident("a class name")?;
        let type_param = if self.peek().token == Token::Lt {
            self.bump();
            let (param, _, _) = self.expect_ident("a type parameter name")?;
            self.expect(Token::Gt, "`>`")?;
            Some(param)
        } else {
            None
        };
        let superclass = if self.peek().token == Token::Extends {
            self.bump();
            let (super_name, _, _) = self.expect_ident("a superclass name")?;
            let super_arg = if self.peek().token == Token::Lt {
                self.bump();
                let (arg, _, _) = self.expect_ident("a type argument")?;
                self.expect(Token::Gt, "`>`")?;
                Some(arg)
            } else {
                None
            };
            Some((super_name, super_arg))
        } else {
            None
        };
        self.expect(Token::LBrace, "`{`")?;
        self.expect(Token::RBrace, "`}` (class bodies must be empty)")?;
        let decl = ClassDecl {
            name,
            type_param,
            // The raw argument is classified against the whole table later.
            superclass: superclass.map(|(name, arg)| SuperRef {
                name,
                super_arg: arg.map(ArgTerm::Class),
            }),
        };
        Ok((decl, line, col))
    }
}

/// Parses a program into a resolved [`ClassTable`].
pub fn parse(source: &str) -> Result<ClassTable, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, pos: 0 };

    let mut decls: Vec<(ClassDecl, usize, usize)> = Vec::new();
    while parser.peek().token != Token::Eof {
        decls.push(parser.decl()?);
    }

    // Pass two: name resolution over the complete declaration list.
    let mut seen: HashMap<String, ()> = HashMap::new();
    for (decl, line, col) in &decls {
        if decl.name == OBJECT || seen.contains_key(&decl.name) {
            return Err(ParseError::DuplicateClass {
                name: decl.name.clone(),
                line: *line,
                col: *col,
            });
        }
        seen.insert(decl.name.clone(), ());
    }

    let mut resolved = Vec::with_capacity(decls.len());
    let lookup: HashMap<&str, &ClassDecl> =
        decls.iter().map(|(d, _, _)| (d.name.as_str(), d)).collect();
    for (decl, _, _) in &decls {
        let mut decl = decl.clone();
        if let Some(sup) = &mut decl.superclass {
            let super_generic = if sup.name == OBJECT {
                false
            } else {
                match lookup.get(sup.name.as_str()) {
                    Some(target) => target.is_generic(),
                    None => {
                        return Err(ParseError::UnknownSuperclass {
                            class: decl.name.clone(),
                            superclass: sup.name.clone(),
                        })
                    }
                }
            };
            if let Some(arg) = &mut sup.super_arg {
                if !super_generic {
                    return Err(ParseError::SuperArgOnNonGeneric {
                        class: decl.name.clone(),
                        superclass: sup.name.clone(),
                    });
                }
                let raw = arg.to_string();
                *arg = if decl.type_param.as_deref() == Some(raw.as_str()) {
                    ArgTerm::TypeParam(raw)
                } else if raw == OBJECT
                    || lookup.get(raw.as_str()).is_some_and(|d| !d.is_generic())
                {
                    ArgTerm::Class(raw)
                } else {
                    return Err(ParseError::UnknownSuperArg {
                        class: decl.name.clone(),
                        arg: raw,
                    });
                };
            }
        }
        resolved.push(decl);
    }

    // Cycle check over the extends relation.
    let table = ClassTable { decls: resolved };
    for decl in &table.decls {
        let mut slow = decl.name.as_str();
        let mut hops = 0usize;
        loop {
            if slow == OBJECT {
                break;
            }
            if hops > table.decls.len() {
                return Err(ParseError::CyclicExtends(decl.name.clone()));
            }
            slow = table
                .get(slow)
                .expect("superclass references are resolved")
                .super_name();
            hops += 1;
        }
    }

    Ok(table)
}

/// The subclassing graph: one atom vertex per class including `Object`, an
/// edge from each class to its direct superclass, and the set of generic
/// class labels.
pub fn subclassing_graph(table: &ClassTable) -> (Digraph, BTreeSet<Label>) {
    let mut vertices = vec![Label::atom(OBJECT)];
    let mut edges = Vec::new();
    let mut generic_set = BTreeSet::new();
    for decl in table.decls() {
        vertices.push(Label::atom(&decl.name));
        edges.push((Label::atom(&decl.name), Label::atom(decl.super_name())));
        if decl.is_generic() {
            generic_set.insert(Label::atom(&decl.name));
        }
    }
    let graph = Digraph::new(vertices, edges)
        .expect("a resolved acyclic class table forms a simple digraph");
    (graph, generic_set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_generic_class() {
        let table = parse("class C<T> {}").unwrap();
        assert_eq!(table.decls().len(), 1);
        let c = table.get("C").unwrap();
        assert!(c.is_generic());
        assert_eq!(c.type_param.as_deref(), Some("T"));
        assert_eq!(c.super_name(), OBJECT);
    }

    #[test]
    fn empty_program_contains_only_object() {
        let table = parse("").unwrap();
        assert!(table.decls().is_empty());
        assert!(table.contains(OBJECT));
        assert!(!table.is_generic(OBJECT));
    }

    #[test]
    fn parses_forward_and_backward_references() {
        let table = parse("class A {} class B<T> extends A {}").unwrap();
        assert!(!table.get("A").unwrap().is_generic());
        assert_eq!(table.get("B").unwrap().super_name(), "A");

        // Forward reference to a later-declared class.
        let table = parse("class B<T> extends A {} class A {}").unwrap();
        assert_eq!(table.get("B").unwrap().super_name(), "A");
    }

    #[test]
    fn whitespace_and_newlines_are_insignificant() {
        let compact = parse("class A{}class B<T>extends A{}").unwrap();
        let spread = parse("class A {}\n\nclass B<T>\n  extends A {}\n").unwrap();
        assert_eq!(compact, spread);
    }

    #[test]
    fn resolves_super_arg_to_type_param() {
        let table = parse("class C<T> {} class D<T> extends C<T> {}").unwrap();
        let sup = table.get("D").unwrap().superclass.as_ref().unwrap();
        assert_eq!(sup.super_arg, Some(ArgTerm::TypeParam("T".to_string())));
    }

    #[test]
    fn resolves_super_arg_to_nongeneric_class() {
        let table = parse("class A {} class C<T> {} class D extends C<A> {}").unwrap();
        let sup = table.get("D").unwrap().superclass.as_ref().unwrap();
        assert_eq!(sup.super_arg, Some(ArgTerm::Class("A".to_string())));
    }

    #[test]
    fn object_is_a_valid_super_arg() {
        let table = parse("class C<T> {} class D extends C<Object> {}").unwrap();
        let sup = table.get("D").unwrap().superclass.as_ref().unwrap();
        assert_eq!(sup.super_arg, Some(ArgTerm::Class(OBJECT.to_string())));
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse("class A {} class {}").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 1,
                col: 18,
                expected: "a class name".to_string(),
                found: "`{`".to_string(),
            }
        );
    }

    #[test]
    fn nonempty_body_is_rejected() {
        let err = parse("class A { int x; }").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn reserved_words_cannot_name_classes() {
        assert!(matches!(parse("class super {}"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("class extends {}"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn duplicate_class_is_rejected() {
        let err = parse("class A {} class A<T> {}").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateClass { ref name, .. } if name == "A"));
        let err = parse("class Object {}").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateClass { ref name, .. } if name == "Object"));
    }

    #[test]
    fn unknown_superclass_is_rejected() {
        let err = parse("class A extends Missing {}").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownSuperclass {
                class: "A".to_string(),
                superclass: "Missing".to_string(),
            }
        );
    }

    #[test]
    fn cyclic_extends_is_rejected() {
        let err = parse("class A extends B {} class B extends A {}").unwrap_err();
        assert!(matches!(err, ParseError::CyclicExtends(_)));
    }

    #[test]
    fn super_arg_on_nongeneric_superclass_is_rejected() {
        let err = parse("class A {} class B extends A<A> {}").unwrap_err();
        assert_eq!(
            err,
            ParseError::SuperArgOnNonGeneric {
                class: "B".to_string(),
                superclass: "A".to_string(),
            }
        );
    }

    #[test]
    fn undeclared_type_parameter_as_super_arg_is_rejected() {
        let err = parse("class C<T> {} class D extends C<T> {}").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownSuperArg {
                class: "D".to_string(),
                arg: "T".to_string(),
            }
        );
        // A generic class is not allowed as a super argument either.
        let err = parse("class C<T> {} class D extends C<C> {}").unwrap_err();
        assert!(matches!(err, ParseError::UnknownSuperArg { .. }));
    }

    #[test]
    fn pretty_print_round_trips() {
        let source = "class A {} class B<T> extends A {} class D<S> extends B<S> {}";
        let table = parse(source).unwrap();
        let printed = table.pretty_print();
        assert_eq!(parse(&printed).unwrap(), table);
        // Pretty-printing the reparsed table is a fixed point.
        assert_eq!(parse(&printed).unwrap().pretty_print(), printed);
    }

    #[test]
    fn subclassing_graph_of_single_generic_class() {
        let table = parse("class C<T> {}").unwrap();
        let (graph, generic) = subclassing_graph(&table);
        assert_eq!(
            graph,
            Digraph::from_atoms(["Object", "C"], [("C", "Object")]).unwrap()
        );
        assert_eq!(generic, [Label::atom("C")].into_iter().collect());
    }

    #[test]
    fn subclassing_graph_of_empty_table() {
        let (graph, generic) = subclassing_graph(&parse("").unwrap());
        assert_eq!(graph, Digraph::from_atoms(["Object"], []).unwrap());
        assert!(generic.is_empty());
    }

    #[test]
    fn subclassing_graph_edges_point_at_superclasses() {
        let table = parse("class A {} class B<T> extends A {}").unwrap();
        let (graph, generic) = subclassing_graph(&table);
        assert_eq!(
            graph,
            Digraph::from_atoms(
                ["Object", "A", "B"],
                [("A", "Object"), ("B", "A")]
            )
            .unwrap()
        );
        assert_eq!(generic, [Label::atom("B")].into_iter().collect());
    }

    #[test]
    fn subclassing_graph_is_a_dag_with_object_sink() {
        let table = parse(
            "class A {} class B<T> extends A {} class C extends B<A> {} class D<U> {}",
        )
        .unwrap();
        let (graph, _) = subclassing_graph(&table);
        let reduced = crate::analysis::transitive_reduction(&graph);
        assert!(reduced.is_ok(), "subclassing graph must be a DAG");
        let sinks: Vec<_> = graph
            .vertices()
            .filter(|v| graph.successors(v).next().is_none())
            .collect();
        assert_eq!(sinks, vec![&Label::atom(OBJECT)]);
    }
}
