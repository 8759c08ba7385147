//! The universal Prolog value: variables, atoms, numbers and compounds.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

/// Byte-offset range into the source text a node was read from.
///
/// Spans are carried for diagnostics only; structural equality of terms
/// ignores them entirely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    /// Span for terms built programmatically rather than parsed.
    pub fn synthetic() -> Self {
        Span { start: 0, end: 0 }
    }
}

/// A Prolog term together with its source span.
#[derive(Debug, Clone)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

/// The shape of a term.
///
/// Lists are kept desugared: `[H|T]` is `'.'(H, T)` and `[]` is the atom
/// `[]`. The pretty-printer re-sugars them.
#[derive(Debug, Clone)]
pub enum TermKind {
    /// A logic variable. `anonymous` is true iff the source token was `_`;
    /// every `_` occurrence denotes a distinct variable, so anonymous
    /// variables are never identified by name.
    Var { name: String, anonymous: bool },
    Atom(String),
    Int(BigInt),
    Float(f64),
    Compound { functor: String, args: Vec<Term> },
}

/// Structural equality, ignoring spans.
///
/// Named variables compare by name; anonymous variables compare equal to
/// each other (each is distinct at execution time, but two parses of the
/// same source must compare equal).
impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (
                TermKind::Var { name: a, anonymous: false },
                TermKind::Var { name: b, anonymous: false },
            ) => a == b,
            (TermKind::Var { anonymous: true, .. }, TermKind::Var { anonymous: true, .. }) => true,
            (TermKind::Atom(a), TermKind::Atom(b)) => a == b,
            (TermKind::Int(a), TermKind::Int(b)) => a == b,
            (TermKind::Float(a), TermKind::Float(b)) => a.to_bits() == b.to_bits(),
            (
                TermKind::Compound { functor: f, args: fa },
                TermKind::Compound { functor: g, args: ga },
            ) => f == g && fa == ga,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Term {
    pub fn atom(name: impl Into<String>) -> Term {
        Term { kind: TermKind::Atom(name.into()), span: Span::synthetic() }
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term { kind: TermKind::Var { name: name.into(), anonymous: false }, span: Span::synthetic() }
    }

    pub fn anon() -> Term {
        Term { kind: TermKind::Var { name: "_".into(), anonymous: true }, span: Span::synthetic() }
    }

    pub fn int(value: impl Into<BigInt>) -> Term {
        Term { kind: TermKind::Int(value.into()), span: Span::synthetic() }
    }

    pub fn float(value: f64) -> Term {
        Term { kind: TermKind::Float(value), span: Span::synthetic() }
    }

    pub fn compound(functor: impl Into<String>, args: Vec<Term>) -> Term {
        let functor = functor.into();
        debug_assert!(!args.is_empty(), "zero-arity callables are atoms");
        Term { kind: TermKind::Compound { functor, args }, span: Span::synthetic() }
    }

    /// Builds a proper list from elements.
    pub fn list(elems: Vec<Term>) -> Term {
        Self::partial_list(elems, Term::atom("[]"))
    }

    /// Builds `[e1, e2, ... | tail]`.
    pub fn partial_list(elems: Vec<Term>, tail: Term) -> Term {
        elems
            .into_iter()
            .rev()
            .fold(tail, |acc, e| Term::compound(".", vec![e, acc]))
    }

    pub fn with_span(mut self, span: Span) -> Term {
        self.span = span;
        self
    }

    pub fn is_atom(&self, name: &str) -> bool {
        matches!(&self.kind, TermKind::Atom(n) if n == name)
    }

    pub fn is_var(&self) -> bool {
        matches!(self.kind, TermKind::Var { .. })
    }

    pub fn is_anonymous(&self) -> bool {
        matches!(self.kind, TermKind::Var { anonymous: true, .. })
    }

    pub fn is_number(&self) -> bool {
        matches!(self.kind, TermKind::Int(_) | TermKind::Float(_))
    }

    /// True for atoms and compounds, the only terms that may appear as goals
    /// or clause heads.
    pub fn is_callable(&self) -> bool {
        matches!(self.kind, TermKind::Atom(_) | TermKind::Compound { .. })
    }

    /// Functor name and arity for callable terms; atoms have arity 0.
    pub fn functor_arity(&self) -> Option<(&str, usize)> {
        match &self.kind {
            TermKind::Atom(name) => Some((name, 0)),
            TermKind::Compound { functor, args } => Some((functor, args.len())),
            _ => None,
        }
    }

    /// The compound's arguments, if any.
    pub fn args(&self) -> &[Term] {
        match &self.kind {
            TermKind::Compound { args, .. } => args,
            _ => &[],
        }
    }

    /// Child count in the term tree (compound arity, 0 otherwise).
    pub fn child_count(&self) -> usize {
        self.args().len()
    }

    pub fn child(&self, index: usize) -> Option<&Term> {
        self.args().get(index)
    }

    /// Decomposes a proper list into its elements; `None` for partial lists
    /// and non-lists.
    pub fn as_proper_list(&self) -> Option<Vec<&Term>> {
        let mut elems = Vec::new();
        let mut cursor = self;
        loop {
            match &cursor.kind {
                TermKind::Atom(name) if name == "[]" => return Some(elems),
                TermKind::Compound { functor, args } if functor == "." && args.len() == 2 => {
                    elems.push(&args[0]);
                    cursor = &args[1];
                }
                _ => return None,
            }
        }
    }

    /// Number of nodes in this term tree, counting this node.
    pub fn node_count(&self) -> usize {
        1 + self.args().iter().map(Term::node_count).sum::<usize>()
    }

    /// Pre-order walk over all nodes with their child-index paths relative
    /// to this node.
    pub fn walk<'a>(&'a self, prefix: &[usize], visit: &mut dyn FnMut(&[usize], &'a Term)) {
        let mut path = prefix.to_vec();
        self.walk_inner(&mut path, visit);
    }

    fn walk_inner<'a>(&'a self, path: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize], &'a Term)) {
        visit(path, self);
        for (i, arg) in self.args().iter().enumerate() {
            path.push(i);
            arg.walk_inner(path, visit);
            path.pop();
        }
    }
}

impl fmt::Display for Term {
    /// Canonical functional notation, mainly for diagnostics; the
    /// quote-aware operator layout lives in [`crate::syntax::printer`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TermKind::Var { name, anonymous } => {
                if *anonymous {
                    write!(f, "_")
                } else {
                    write!(f, "{name}")
                }
            }
            TermKind::Atom(name) => write!(f, "{name}"),
            TermKind::Int(v) => write!(f, "{v}"),
            TermKind::Float(v) => write!(f, "{v:?}"),
            TermKind::Compound { functor, args } => {
                write!(f, "{functor}(")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{arg}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A predicate indicator: name/arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PredId {
    pub name: String,
    pub arity: usize,
}

impl PredId {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        PredId { name: name.into(), arity }
    }
}

impl fmt::Display for PredId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}
