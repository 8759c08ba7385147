//! The mutation operator catalogue: site enumeration and single-site
//! application.
//!
//! Every operator transforms exactly one site (first-order mutation), and
//! application never touches the input program. Site identifiers are
//! assigned in (catalogue order, clause order, pre-order path) order, so
//! two enumerations of the same program always agree.

mod catalog;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::printer::print_clause;
use crate::syntax::{
    replace_at, resolve_path, Clause, PredId, Program, Term, TermKind, TermPath,
};

pub use catalog::{OperatorClass, OperatorId};

/// What a site points at: a whole predicate, or one node of one clause.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SiteTarget {
    Predicate(PredId),
    Node {
        /// Global clause index in the program's source order.
        clause: usize,
        path: TermPath,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutationSite {
    pub operator: OperatorId,
    pub target: SiteTarget,
    /// Stable ordinal within one enumeration.
    pub id: usize,
}

/// A mutated program together with a human-readable excerpt of the change.
#[derive(Debug, Clone)]
pub struct Mutant {
    pub site: MutationSite,
    pub program: Program,
    pub diff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("site {site_id} ({operator:?}) does not match the program")]
pub struct StaleSite {
    pub site_id: usize,
    pub operator: OperatorId,
}

/// All mutation sites for the selected operators, in canonical order.
pub fn enumerate_sites(program: &Program, ops: &[OperatorId]) -> Vec<MutationSite> {
    let mut sites = Vec::new();
    for op in OperatorId::ALL {
        if !ops.contains(&op) {
            continue;
        }
        collect_sites(program, op, &mut sites);
    }
    for (id, site) in sites.iter_mut().enumerate() {
        site.id = id;
    }
    sites
}

fn collect_sites(program: &Program, op: OperatorId, out: &mut Vec<MutationSite>) {
    let push_node = |out: &mut Vec<MutationSite>, clause: usize, path: &[usize]| {
        out.push(MutationSite {
            operator: op,
            target: SiteTarget::Node { clause, path: TermPath::new(path.to_vec()) },
            id: 0,
        });
    };

    match op {
        OperatorId::RemovePredicate => {
            for pred in program.predicates_in_order() {
                out.push(MutationSite { operator: op, target: SiteTarget::Predicate(pred), id: 0 });
            }
        }
        OperatorId::ReversePredicate => {
            for pred in program.predicates_in_order() {
                if program.clauses_of(&pred).map(|l| l.len()).unwrap_or(0) >= 2 {
                    out.push(MutationSite {
                        operator: op,
                        target: SiteTarget::Predicate(pred),
                        id: 0,
                    });
                }
            }
        }
        OperatorId::PermuteCut => {
            for (ci, clause) in program.clauses().iter().enumerate() {
                for chain in conjunction_chains(&clause.body, &[1]) {
                    for i in 1..chain.elements.len() {
                        let (ref path, node) = chain.elements[i];
                        let (_, prev) = &chain.elements[i - 1];
                        // Swapping two adjacent cuts would reproduce the
                        // original program, which a mutant must never do.
                        if node.is_atom("!") && !prev.is_atom("!") {
                            push_node(out, ci, path);
                        }
                    }
                }
            }
        }
        OperatorId::NegateGoal => {
            for (ci, clause) in program.clauses().iter().enumerate() {
                walk_goals(&clause.body, &mut vec![1], &mut |path, node| {
                    if node.is_callable()
                        && !node.is_atom("!")
                        && node.functor_arity() != Some(("\\+", 1))
                    {
                        push_node(out, ci, path);
                    }
                });
            }
        }
        OperatorId::IncNumber | OperatorId::DecNumber => {
            for (ci, clause) in program.clauses().iter().enumerate() {
                let mut visit = |path: &[usize], node: &Term| {
                    if node.is_number() {
                        push_node(out, ci, path);
                    }
                };
                clause.head.walk(&[0], &mut visit);
                clause.body.walk(&[1], &mut visit);
            }
        }
        OperatorId::VarToAnon => {
            for (ci, clause) in program.clauses().iter().enumerate() {
                let mut visit = |path: &[usize], node: &Term| {
                    if matches!(&node.kind, TermKind::Var { anonymous: false, .. }) {
                        push_node(out, ci, path);
                    }
                };
                clause.head.walk(&[0], &mut visit);
                clause.body.walk(&[1], &mut visit);
            }
        }
        OperatorId::AtomToAnon | OperatorId::NilToAnon => {
            let want_nil = op == OperatorId::NilToAnon;
            for (ci, clause) in program.clauses().iter().enumerate() {
                let goals = goal_positions(clause);
                let mut visit = |path: &[usize], node: &Term| {
                    let TermKind::Atom(name) = &node.kind else { return };
                    if (name == "[]") != want_nil {
                        return;
                    }
                    // Argument positions only: not the head itself, not a
                    // goal.
                    if path == [0] || goals.contains(&path.to_vec()) {
                        return;
                    }
                    push_node(out, ci, path);
                };
                clause.head.walk(&[0], &mut visit);
                clause.body.walk(&[1], &mut visit);
            }
        }
        OperatorId::TrueToFalse => {
            for (ci, clause) in program.clauses().iter().enumerate() {
                clause.body.walk(&[1], &mut |path, node| {
                    if node.is_atom("true") {
                        push_node(out, ci, path);
                    }
                });
            }
        }
        OperatorId::FalseToTrue => {
            for (ci, clause) in program.clauses().iter().enumerate() {
                clause.body.walk(&[1], &mut |path, node| {
                    if node.is_atom("fail") || node.is_atom("false") {
                        push_node(out, ci, path);
                    }
                });
            }
        }
        _ => {
            // Functor swaps match one exact functor/arity anywhere in the
            // clause body.
            let (from, _) = op.functor_swap().expect("remaining operators are functor swaps");
            for (ci, clause) in program.clauses().iter().enumerate() {
                clause.body.walk(&[1], &mut |path, node| {
                    if node.functor_arity() != Some((from, 2)) {
                        return;
                    }
                    // If-then-else is not a disjunction: mutating its `;`
                    // would corrupt the construct.
                    if op == OperatorId::SemiToComma {
                        if let TermKind::Compound { args, .. } = &node.kind {
                            if args[0].functor_arity() == Some(("->", 2)) {
                                return;
                            }
                        }
                    }
                    push_node(out, ci, path);
                });
            }
        }
    }
}

/// Produces the mutant for a site enumerated from this program.
pub fn apply(program: &Program, site: &MutationSite) -> Result<Mutant, StaleSite> {
    let stale = || StaleSite { site_id: site.id, operator: site.operator };

    match &site.target {
        SiteTarget::Predicate(pred) => {
            let locs = program.clauses_of(pred).ok_or_else(stale)?;
            let before: Vec<String> =
                locs.iter().map(|&i| print_clause(&program.clauses()[i])).collect();
            match site.operator {
                OperatorId::RemovePredicate => {
                    let mutated = program.without_predicate(pred);
                    let diff = before.iter().map(|c| format!("- {c}")).collect::<Vec<_>>().join("\n");
                    Ok(Mutant { site: site.clone(), program: mutated, diff })
                }
                OperatorId::ReversePredicate => {
                    if locs.len() < 2 {
                        return Err(stale());
                    }
                    let mutated = program.with_predicate_reversed(pred);
                    let after: Vec<String> = before.iter().rev().cloned().collect();
                    let diff = before
                        .iter()
                        .map(|c| format!("- {c}"))
                        .chain(after.iter().map(|c| format!("+ {c}")))
                        .collect::<Vec<_>>()
                        .join("\n");
                    Ok(Mutant { site: site.clone(), program: mutated, diff })
                }
                _ => Err(stale()),
            }
        }
        SiteTarget::Node { clause: ci, path } => {
            let clause = program.clauses().get(*ci).ok_or_else(stale)?;
            let mutated_clause = if site.operator == OperatorId::PermuteCut {
                permute_cut(clause, path).ok_or_else(stale)?
            } else {
                let node = resolve_path(clause, path).map_err(|_| stale())?;
                let replacement = replacement_for(site.operator, node).ok_or_else(stale)?;
                replace_at(clause, path, replacement).map_err(|_| stale())?
            };
            let diff = format!("- {}\n+ {}", print_clause(clause), print_clause(&mutated_clause));
            let mutated = program.with_clause_replaced(*ci, mutated_clause);
            Ok(Mutant { site: site.clone(), program: mutated, diff })
        }
    }
}

/// The node-level rewrite for every operator except cut permutation.
fn replacement_for(op: OperatorId, node: &Term) -> Option<Term> {
    let span = node.span;
    match op {
        OperatorId::IncNumber | OperatorId::DecNumber => {
            let delta: i32 = if op == OperatorId::IncNumber { 1 } else { -1 };
            match &node.kind {
                TermKind::Int(v) => Some(Term::int(v + delta).with_span(span)),
                TermKind::Float(v) => Some(Term::float(v + f64::from(delta)).with_span(span)),
                _ => None,
            }
        }
        OperatorId::NegateGoal => {
            if node.is_callable() && !node.is_atom("!") && node.functor_arity() != Some(("\\+", 1))
            {
                Some(Term::compound("\\+", vec![node.clone()]).with_span(span))
            } else {
                None
            }
        }
        OperatorId::TrueToFalse => {
            node.is_atom("true").then(|| Term::atom("fail").with_span(span))
        }
        OperatorId::FalseToTrue => (node.is_atom("fail") || node.is_atom("false"))
            .then(|| Term::atom("true").with_span(span)),
        OperatorId::VarToAnon => {
            matches!(&node.kind, TermKind::Var { anonymous: false, .. })
                .then(|| Term::anon().with_span(span))
        }
        OperatorId::AtomToAnon => match &node.kind {
            TermKind::Atom(name) if name != "[]" => Some(Term::anon().with_span(span)),
            _ => None,
        },
        OperatorId::NilToAnon => node.is_atom("[]").then(|| Term::anon().with_span(span)),
        _ => {
            let (from, to) = op.functor_swap()?;
            match &node.kind {
                TermKind::Compound { functor, args } if functor == from && args.len() == 2 => {
                    Some(Term::compound(to, args.clone()).with_span(span))
                }
                _ => None,
            }
        }
    }
}

/// Swaps a cut with its immediately preceding conjunct.
fn permute_cut(clause: &Clause, cut_path: &TermPath) -> Option<Clause> {
    for chain in conjunction_chains(&clause.body, &[1]) {
        let Some(pos) = chain
            .elements
            .iter()
            .position(|(path, _)| path.as_slice() == cut_path.steps())
        else {
            continue;
        };
        if pos == 0 || !chain.elements[pos].1.is_atom("!") {
            return None;
        }
        let mut elems: Vec<Term> =
            chain.elements.iter().map(|(_, node)| (*node).clone()).collect();
        elems.swap(pos - 1, pos);
        let span = resolve_path(clause, &TermPath::new(chain.root.clone())).ok()?.span;
        let rebuilt = elems
            .into_iter()
            .rev()
            .reduce(|acc, elem| Term::compound(",", vec![elem, acc]).with_span(span))
            .expect("chains have at least two elements");
        return replace_at(clause, &TermPath::new(chain.root.clone()), rebuilt).ok();
    }
    None
}

/// A maximal conjunction inside the body's goal structure.
struct Chain<'t> {
    root: Vec<usize>,
    elements: Vec<(Vec<usize>, &'t Term)>,
}

/// Collects all maximal conjunction chains, recursing through `;` and `->`
/// branches. Arguments of `\+` and `call/N` are goal leaves, not chain
/// contexts.
fn conjunction_chains<'t>(body: &'t Term, path: &[usize]) -> Vec<Chain<'t>> {
    let mut chains = Vec::new();
    chain_contexts(body, path, &mut chains);
    chains
}

fn chain_contexts<'t>(node: &'t Term, path: &[usize], out: &mut Vec<Chain<'t>>) {
    match node.functor_arity() {
        Some((",", 2)) => {
            let mut elements = Vec::new();
            flatten_conj(node, path.to_vec(), &mut elements);
            for (epath, elem) in &elements {
                if matches!(elem.functor_arity(), Some((";", 2)) | Some(("->", 2))) {
                    recurse_branches(elem, epath, out);
                }
            }
            out.push(Chain { root: path.to_vec(), elements });
        }
        Some((";", 2)) | Some(("->", 2)) => recurse_branches(node, path, out),
        _ => {}
    }
}

fn recurse_branches<'t>(node: &'t Term, path: &[usize], out: &mut Vec<Chain<'t>>) {
    for (i, arg) in node.args().iter().enumerate() {
        let mut child = path.to_vec();
        child.push(i);
        chain_contexts(arg, &child, out);
    }
}

fn flatten_conj<'t>(node: &'t Term, path: Vec<usize>, out: &mut Vec<(Vec<usize>, &'t Term)>) {
    if node.functor_arity() == Some((",", 2)) {
        let mut left = path.clone();
        left.push(0);
        let mut right = path;
        right.push(1);
        flatten_conj(&node.args()[0], left, out);
        flatten_conj(&node.args()[1], right, out);
    } else {
        out.push((path, node));
    }
}

/// Paths of the body's goal structure: control nodes and the sub-goal
/// leaves under them. Used to tell goal positions from argument positions.
fn goal_positions(clause: &Clause) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn recurse(node: &Term, path: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        if matches!(node.functor_arity(), Some((",", 2)) | Some((";", 2)) | Some(("->", 2))) {
            for (i, arg) in node.args().iter().enumerate() {
                let mut child = path.clone();
                child.push(i);
                recurse(arg, child, out);
            }
        }
    }
    recurse(&clause.body, vec![1], &mut out);
    out
}

/// The coverage sub-goal inventory of a clause: every non-control callable
/// leaf of the body's goal structure, with `!` and `true` counting like any
/// goal. Facts contribute their implicit `true` body.
pub fn subgoal_inventory(clause: &Clause) -> Vec<TermPath> {
    let mut out = Vec::new();
    walk_goals(&clause.body, &mut vec![1], &mut |path, _| {
        out.push(TermPath::new(path.to_vec()));
    });
    out
}

/// Visits the body's sub-goal leaves, recursing only through `,`, `;` and
/// `->`.
fn walk_goals(node: &Term, path: &mut Vec<usize>, visit: &mut impl FnMut(&[usize], &Term)) {
    if matches!(node.functor_arity(), Some((",", 2)) | Some((";", 2)) | Some(("->", 2))) {
        for (i, arg) in node.args().iter().enumerate() {
            path.push(i);
            walk_goals(arg, path, visit);
            path.pop();
        }
    } else {
        visit(path, node);
    }
}
