//! Variable binding store with a trail for backtracking.

use std::collections::{HashMap, HashSet};

use crate::syntax::{Span, Term, TermKind};

/// Maps variable identities to terms. Fresh variables are produced from a
/// generation counter, so renamed clause instances can never capture each
/// other's variables.
///
/// The occurs check is off (matching the usual interpreter defaults), so
/// chains may be rational; [`Bindings::resolve`] guards against cycles
/// instead of assuming their absence.
#[derive(Debug, Default, Clone)]
pub struct Bindings {
    map: HashMap<String, Term>,
    trail: Vec<String>,
    fresh: u64,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh_var(&mut self, span: Span) -> Term {
        let name = format!("_G{}", self.fresh);
        self.fresh += 1;
        Term { kind: TermKind::Var { name, anonymous: false }, span }
    }

    /// Current generation counter.
    pub fn generation(&self) -> u64 {
        self.fresh
    }

    /// Trail position to restore to on backtracking.
    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    /// Unbinds everything recorded after `mark`.
    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let name = self.trail.pop().expect("trail length checked");
            self.map.remove(&name);
        }
    }

    /// Binds an unbound variable and records it on the trail.
    pub fn bind(&mut self, name: &str, term: Term) {
        debug_assert!(!self.map.contains_key(name), "rebinding a bound variable");
        self.map.insert(name.to_string(), term);
        self.trail.push(name.to_string());
    }

    pub fn lookup(&self, name: &str) -> Option<&Term> {
        self.map.get(name)
    }

    /// Follows variable chains to the representative term without touching
    /// inner structure. Returns a clone of the chain end.
    pub fn walk(&self, term: &Term) -> Term {
        let mut cursor = term;
        let mut hops = 0usize;
        while let TermKind::Var { name, .. } = &cursor.kind {
            match self.map.get(name) {
                Some(next) => cursor = next,
                None => break,
            }
            hops += 1;
            if hops > self.map.len() {
                break; // cyclic variable chain
            }
        }
        cursor.clone()
    }

    /// Fully applies the substitution. Unbound variables remain; variables
    /// already being expanded are emitted as-is, which breaks cycles.
    ///
    /// On acyclic stores the result is a fixpoint: applying `resolve` twice
    /// equals applying it once.
    pub fn resolve(&self, term: &Term) -> Term {
        let mut visiting = HashSet::new();
        self.resolve_inner(term, &mut visiting)
    }

    fn resolve_inner(&self, term: &Term, visiting: &mut HashSet<String>) -> Term {
        match &term.kind {
            TermKind::Var { name, .. } => match self.map.get(name) {
                Some(bound) if !visiting.contains(name) => {
                    visiting.insert(name.clone());
                    let out = self.resolve_inner(bound, visiting);
                    visiting.remove(name);
                    out
                }
                _ => term.clone(),
            },
            TermKind::Compound { functor, args } => {
                let args = args
                    .iter()
                    .map(|a| self.resolve_inner(a, visiting))
                    .collect();
                Term {
                    kind: TermKind::Compound { functor: clone_functor(functor), args },
                    span: term.span,
                }
            }
            _ => term.clone(),
        }
    }

    /// Copies a clause with every variable renamed fresh. Named variables
    /// are renamed consistently within the clause; each anonymous
    /// occurrence becomes its own fresh variable.
    pub fn rename_pair(&mut self, head: &Term, body: &Term) -> (Term, Term) {
        let mut mapping = HashMap::new();
        let renamed_head = self.rename_term(head, &mut mapping);
        let renamed_body = self.rename_term(body, &mut mapping);
        (renamed_head, renamed_body)
    }

    /// Renames a query goal, returning the renamed goal and the mapping
    /// from original named variables to their fresh stand-ins.
    pub fn rename_query(&mut self, goal: &Term) -> (Term, Vec<(String, String)>) {
        let mut mapping = HashMap::new();
        let renamed = self.rename_term(goal, &mut mapping);
        let mut pairs: Vec<(String, String)> = mapping
            .into_iter()
            .map(|(orig, fresh)| {
                let TermKind::Var { name, .. } = fresh.kind else { unreachable!() };
                (orig, name)
            })
            .collect();
        pairs.sort();
        (renamed, pairs)
    }

    fn rename_term(&mut self, term: &Term, mapping: &mut HashMap<String, Term>) -> Term {
        match &term.kind {
            TermKind::Var { anonymous: true, .. } => self.fresh_var(term.span),
            TermKind::Var { name, .. } => match mapping.get(name) {
                Some(fresh) => Term { kind: fresh.kind.clone(), span: term.span },
                None => {
                    let fresh = self.fresh_var(term.span);
                    mapping.insert(name.clone(), fresh.clone());
                    fresh
                }
            },
            TermKind::Compound { functor, args } => {
                let args = args.iter().map(|a| self.rename_term(a, mapping)).collect();
                Term {
                    kind: TermKind::Compound { functor: clone_functor(functor), args },
                    span: term.span,
                }
            }
            _ => term.clone(),
        }
    }
}

fn clone_functor(functor: &str) -> String {
    functor.to_string()
}
