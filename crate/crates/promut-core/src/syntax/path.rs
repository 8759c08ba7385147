//! Stable addressing of term nodes inside a clause.
//!
//! A path is a list of child indices from the clause root: the head is
//! child 0, the body child 1, and deeper steps are argument positions.
//! Paths are independent of source offsets, so mutant identities survive
//! pretty-printing.

use serde::Serialize;
use thiserror::Error;

use super::program::Clause;
use super::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TermPath(pub Vec<usize>);

impl TermPath {
    pub fn new(steps: Vec<usize>) -> Self {
        TermPath(steps)
    }

    pub fn steps(&self) -> &[usize] {
        &self.0
    }
}

impl std::fmt::Display for TermPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("path {path} does not address a node of the clause")]
pub struct InvalidPath {
    pub path: TermPath,
}

/// The node a path addresses.
pub fn resolve_path<'c>(clause: &'c Clause, path: &TermPath) -> Result<&'c Term, InvalidPath> {
    let invalid = || InvalidPath { path: path.clone() };
    let mut steps = path.steps().iter();
    let mut node = match steps.next() {
        Some(0) => &clause.head,
        Some(1) => &clause.body,
        _ => return Err(invalid()),
    };
    for &step in steps {
        node = node.child(step).ok_or_else(invalid)?;
    }
    Ok(node)
}

/// A new clause in which only the addressed subtree is replaced; the input
/// clause is untouched.
pub fn replace_at(
    clause: &Clause,
    path: &TermPath,
    replacement: Term,
) -> Result<Clause, InvalidPath> {
    let invalid = || InvalidPath { path: path.clone() };
    let mut out = clause.clone();
    let steps = path.steps();
    let root = match steps.first() {
        Some(0) => &mut out.head,
        Some(1) => &mut out.body,
        _ => return Err(invalid()),
    };
    let mut node = root;
    for &step in &steps[1..] {
        node = match &mut node.kind {
            super::term::TermKind::Compound { args, .. } => {
                args.get_mut(step).ok_or_else(invalid)?
            }
            _ => return Err(invalid()),
        };
    }
    *node = replacement;
    Ok(out)
}

/// All paths of a clause in pre-order: the head subtree first, then the
/// body subtree.
pub fn enumerate_paths(clause: &Clause) -> Vec<TermPath> {
    let mut paths = Vec::with_capacity(clause.head.node_count() + clause.body.node_count());
    clause.head.walk(&[0], &mut |path, _| paths.push(TermPath::new(path.to_vec())));
    clause.body.walk(&[1], &mut |path, _| paths.push(TermPath::new(path.to_vec())));
    paths
}

#[cfg(test)]
mod tests {
    use super::*;

    fn min_clause_one() -> Clause {
        // min(A, B, A) :- A < B, !.
        Clause {
            head: Term::compound("min", vec![Term::var("A"), Term::var("B"), Term::var("A")]),
            body: Term::compound(
                ",",
                vec![
                    Term::compound("<", vec![Term::var("A"), Term::var("B")]),
                    Term::atom("!"),
                ],
            ),
            index: 0,
        }
    }

    #[test]
    fn resolves_head_body_and_subgoals() {
        let c = min_clause_one();
        assert_eq!(resolve_path(&c, &TermPath::new(vec![0])).unwrap(), &c.head);
        assert_eq!(
            resolve_path(&c, &TermPath::new(vec![1, 0])).unwrap(),
            &Term::compound("<", vec![Term::var("A"), Term::var("B")])
        );
        assert_eq!(
            resolve_path(&c, &TermPath::new(vec![1, 0, 0])).unwrap(),
            &Term::var("A")
        );
        assert!(resolve_path(&c, &TermPath::new(vec![1, 2])).is_err());
        assert!(resolve_path(&c, &TermPath::new(vec![2])).is_err());
    }

    #[test]
    fn replace_then_resolve_returns_replacement() {
        let c = min_clause_one();
        let path = TermPath::new(vec![1, 0]);
        let replacement = Term::compound(">=", vec![Term::var("A"), Term::var("B")]);
        let mutated = replace_at(&c, &path, replacement.clone()).unwrap();
        assert_eq!(resolve_path(&mutated, &path).unwrap(), &replacement);
        // Value semantics: the original clause still holds `<`.
        assert_eq!(
            resolve_path(&c, &path).unwrap().functor_arity(),
            Some(("<", 2))
        );
    }

    #[test]
    fn path_enumeration_matches_node_count() {
        let c = min_clause_one();
        let paths = enumerate_paths(&c);
        assert_eq!(paths.len(), c.head.node_count() + c.body.node_count());
        // Canonical: no two paths address the same node.
        let mut dedup = paths.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), paths.len());
    }
}
