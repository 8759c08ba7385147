//! Clauses and programs: the unit being tested and mutated.

use std::collections::BTreeMap;

use super::term::{PredId, Term};

/// One clause. Facts are normalized at parse time to carry the body `true`,
/// so every clause has the same shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    /// Head term; never a variable or number.
    pub head: Term,
    /// Body goal term; the atom `true` for facts.
    pub body: Term,
    /// Ordinal of this clause within its predicate, in source order.
    pub index: usize,
}

impl Clause {
    pub fn pred_id(&self) -> PredId {
        let (name, arity) = self
            .head
            .functor_arity()
            .expect("clause heads are callable by construction");
        PredId::new(name, arity)
    }

    /// True iff the body is the bare atom `true`.
    pub fn is_fact(&self) -> bool {
        self.body.is_atom("true")
    }
}

/// An ordered clause list with a derived predicate index.
///
/// Programs are immutable after construction; mutation testing builds new
/// programs rather than editing in place, which keeps concurrent mutant
/// runs coordination-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    clauses: Vec<Clause>,
    /// Maps each predicate to the global positions of its clauses, in
    /// source order.
    index: BTreeMap<PredId, Vec<usize>>,
    /// Directives (`:- Goal`) encountered in the file, in source order.
    /// They take no part in resolution; the test harness interprets them.
    directives: Vec<Term>,
}

impl Program {
    pub fn new(clauses: Vec<(Term, Term)>, directives: Vec<Term>) -> Program {
        let mut out = Vec::with_capacity(clauses.len());
        let mut index: BTreeMap<PredId, Vec<usize>> = BTreeMap::new();
        for (head, body) in clauses {
            let (name, arity) = head
                .functor_arity()
                .expect("clause heads are callable by construction");
            let pred = PredId::new(name, arity);
            let slot = index.entry(pred).or_default();
            let ordinal = slot.len();
            slot.push(out.len());
            out.push(Clause { head, body, index: ordinal });
        }
        Program { clauses: out, index, directives }
    }

    pub fn empty() -> Program {
        Program::new(Vec::new(), Vec::new())
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn directives(&self) -> &[Term] {
        &self.directives
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Global clause positions for a predicate, in source order.
    pub fn clauses_of(&self, pred: &PredId) -> Option<&[usize]> {
        self.index.get(pred).map(Vec::as_slice)
    }

    pub fn defines(&self, pred: &PredId) -> bool {
        self.index.contains_key(pred)
    }

    /// Predicates in order of first appearance in the source.
    pub fn predicates_in_order(&self) -> Vec<PredId> {
        let mut preds: Vec<(usize, &PredId)> =
            self.index.iter().map(|(p, locs)| (locs[0], p)).collect();
        preds.sort_by_key(|&(first, _)| first);
        preds.into_iter().map(|(_, p)| p.clone()).collect()
    }

    /// The index recomputed from scratch; used to check the derivability
    /// invariant.
    pub fn rebuild_index(&self) -> BTreeMap<PredId, Vec<usize>> {
        let mut index: BTreeMap<PredId, Vec<usize>> = BTreeMap::new();
        for (i, clause) in self.clauses.iter().enumerate() {
            index.entry(clause.pred_id()).or_default().push(i);
        }
        index
    }

    pub fn index(&self) -> &BTreeMap<PredId, Vec<usize>> {
        &self.index
    }

    /// A new program with the clause at `global_idx` replaced.
    pub fn with_clause_replaced(&self, global_idx: usize, clause: Clause) -> Program {
        let mut clauses: Vec<(Term, Term)> = self
            .clauses
            .iter()
            .map(|c| (c.head.clone(), c.body.clone()))
            .collect();
        clauses[global_idx] = (clause.head, clause.body);
        Program::new(clauses, self.directives.clone())
    }

    /// A new program without any clause of `pred`.
    pub fn without_predicate(&self, pred: &PredId) -> Program {
        let clauses = self
            .clauses
            .iter()
            .filter(|c| &c.pred_id() != pred)
            .map(|c| (c.head.clone(), c.body.clone()))
            .collect();
        Program::new(clauses, self.directives.clone())
    }

    /// A new program with `pred`'s clauses in reverse order, kept in the
    /// same global slots.
    pub fn with_predicate_reversed(&self, pred: &PredId) -> Program {
        let Some(locs) = self.clauses_of(pred) else {
            return self.clone();
        };
        let mut clauses: Vec<(Term, Term)> = self
            .clauses
            .iter()
            .map(|c| (c.head.clone(), c.body.clone()))
            .collect();
        let reversed: Vec<(Term, Term)> =
            locs.iter().rev().map(|&i| clauses[i].clone()).collect();
        for (&slot, clause) in locs.iter().zip(reversed) {
            clauses[slot] = clause;
        }
        Program::new(clauses, self.directives.clone())
    }
}
