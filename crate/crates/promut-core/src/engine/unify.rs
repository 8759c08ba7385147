//! Syntactic unification without the occurs check.

use super::bindings::Bindings;
use crate::syntax::{Term, TermKind};

/// Extends `store` with the most general unifier of `a` and `b`. On
/// failure the store is rolled back, so the input state is observably
/// unchanged.
pub fn unify(store: &mut Bindings, a: &Term, b: &Term) -> bool {
    let mark = store.mark();
    if unify_inner(store, a, b) {
        true
    } else {
        store.undo_to(mark);
        false
    }
}

fn unify_inner(store: &mut Bindings, a: &Term, b: &Term) -> bool {
    let a = store.walk(a);
    let b = store.walk(b);
    match (&a.kind, &b.kind) {
        (TermKind::Var { name: na, .. }, TermKind::Var { name: nb, .. }) if na == nb => true,
        (TermKind::Var { name, .. }, _) => {
            store.bind(name, b);
            true
        }
        (_, TermKind::Var { name, .. }) => {
            store.bind(name, a);
            true
        }
        (TermKind::Atom(x), TermKind::Atom(y)) => x == y,
        (TermKind::Int(x), TermKind::Int(y)) => x == y,
        // Floats unify only when bit-identical; integers and floats never
        // unify (1 = 1.0 fails).
        (TermKind::Float(x), TermKind::Float(y)) => x.to_bits() == y.to_bits(),
        (
            TermKind::Compound { functor: f, args: fa },
            TermKind::Compound { functor: g, args: ga },
        ) => {
            if f != g || fa.len() != ga.len() {
                return false;
            }
            fa.iter().zip(ga).all(|(x, y)| unify_inner(store, x, y))
        }
        _ => false,
    }
}
