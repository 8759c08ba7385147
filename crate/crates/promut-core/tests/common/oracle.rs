//! An independent brute-force site scanner.
//!
//! Re-derives per-operator site counts from the documented rules with its
//! own walks, without touching `enumerate_sites` or the walking helpers it
//! uses. Kept deliberately naive.

use promut_core::mutate::OperatorId;
use promut_core::syntax::{Clause, Program, Term, TermKind};

fn is_named_var(t: &Term) -> bool {
    matches!(&t.kind, TermKind::Var { anonymous: false, .. })
}

fn is_atom_named(t: &Term, name: &str) -> bool {
    matches!(&t.kind, TermKind::Atom(n) if n == name)
}

fn functor_is<'t>(t: &'t Term, name: &str, arity: usize) -> Option<&'t [Term]> {
    match &t.kind {
        TermKind::Compound { functor, args } if functor == name && args.len() == arity => {
            Some(args)
        }
        _ => None,
    }
}

/// Every node of a tree, pre-order.
fn collect<'t>(t: &'t Term, out: &mut Vec<&'t Term>) {
    out.push(t);
    if let TermKind::Compound { args, .. } = &t.kind {
        for a in args {
            collect(a, out);
        }
    }
}

fn body_nodes(clause: &Clause) -> Vec<&Term> {
    let mut out = Vec::new();
    collect(&clause.body, &mut out);
    out
}

fn all_nodes(clause: &Clause) -> Vec<&Term> {
    let mut out = Vec::new();
    collect(&clause.head, &mut out);
    collect(&clause.body, &mut out);
    out
}

fn is_control(t: &Term) -> bool {
    functor_is(t, ",", 2).is_some()
        || functor_is(t, ";", 2).is_some()
        || functor_is(t, "->", 2).is_some()
}

/// Sub-goal leaves of a body, recursing only through the control functors.
fn goal_leaves<'t>(t: &'t Term, out: &mut Vec<&'t Term>) {
    if is_control(t) {
        if let TermKind::Compound { args, .. } = &t.kind {
            for a in args {
                goal_leaves(a, out);
            }
        }
    } else {
        out.push(t);
    }
}

/// Nodes occupying goal-structure positions (control nodes and leaves),
/// by identity.
fn goal_structure(t: &Term, out: &mut Vec<*const Term>) {
    out.push(t as *const Term);
    if is_control(t) {
        if let TermKind::Compound { args, .. } = &t.kind {
            for a in args {
                goal_structure(a, out);
            }
        }
    }
}

fn flatten_conjunction<'t>(t: &'t Term, out: &mut Vec<&'t Term>) {
    if let Some(args) = functor_is(t, ",", 2) {
        flatten_conjunction(&args[0], out);
        flatten_conjunction(&args[1], out);
    } else {
        out.push(t);
    }
}

/// Cuts movable one slot left, inside a goal-structure context.
fn movable_cuts(context: &Term) -> usize {
    if functor_is(context, ",", 2).is_some() {
        let mut elems = Vec::new();
        flatten_conjunction(context, &mut elems);
        let mut count = 0;
        for i in 1..elems.len() {
            if is_atom_named(elems[i], "!") && !is_atom_named(elems[i - 1], "!") {
                count += 1;
            }
        }
        for e in &elems {
            if functor_is(e, ";", 2).is_some() || functor_is(e, "->", 2).is_some() {
                if let TermKind::Compound { args, .. } = &e.kind {
                    count += args.iter().map(movable_cuts).sum::<usize>();
                }
            }
        }
        count
    } else if functor_is(context, ";", 2).is_some() || functor_is(context, "->", 2).is_some() {
        if let TermKind::Compound { args, .. } = &context.kind {
            args.iter().map(movable_cuts).sum()
        } else {
            0
        }
    } else {
        0
    }
}

/// How many sites the named operator has in the program.
pub fn site_count(program: &Program, op: OperatorId) -> usize {
    let clauses = program.clauses();
    match op {
        OperatorId::RemovePredicate => program.index().len(),
        OperatorId::ReversePredicate => {
            program.index().values().filter(|locs| locs.len() >= 2).count()
        }
        OperatorId::SemiToComma => clauses
            .iter()
            .flat_map(body_nodes)
            .filter(|t| {
                functor_is(t, ";", 2)
                    .is_some_and(|args| functor_is(&args[0], "->", 2).is_none())
            })
            .count(),
        OperatorId::IncNumber | OperatorId::DecNumber => clauses
            .iter()
            .flat_map(all_nodes)
            .filter(|t| matches!(t.kind, TermKind::Int(_) | TermKind::Float(_)))
            .count(),
        OperatorId::VarToAnon => {
            clauses.iter().flat_map(all_nodes).filter(|t| is_named_var(t)).count()
        }
        OperatorId::AtomToAnon | OperatorId::NilToAnon => {
            let want_nil = op == OperatorId::NilToAnon;
            let mut count = 0;
            for clause in clauses {
                let mut goals = Vec::new();
                goal_structure(&clause.body, &mut goals);
                let argument_position = |t: &Term| {
                    let p = t as *const Term;
                    !std::ptr::eq(p, &clause.head) && !goals.contains(&p)
                };
                count += all_nodes(clause)
                    .iter()
                    .filter(|t| {
                        matches!(&t.kind, TermKind::Atom(name) if (name == "[]") == want_nil)
                            && argument_position(t)
                    })
                    .count();
            }
            count
        }
        OperatorId::NegateGoal => {
            let mut count = 0;
            for clause in clauses {
                let mut leaves = Vec::new();
                goal_leaves(&clause.body, &mut leaves);
                count += leaves
                    .iter()
                    .filter(|t| {
                        matches!(t.kind, TermKind::Atom(_) | TermKind::Compound { .. })
                            && !is_atom_named(t, "!")
                            && functor_is(t, "\\+", 1).is_none()
                    })
                    .count();
            }
            count
        }
        OperatorId::TrueToFalse => clauses
            .iter()
            .flat_map(body_nodes)
            .filter(|t| is_atom_named(t, "true"))
            .count(),
        OperatorId::FalseToTrue => clauses
            .iter()
            .flat_map(body_nodes)
            .filter(|t| is_atom_named(t, "fail") || is_atom_named(t, "false"))
            .count(),
        OperatorId::PermuteCut => clauses.iter().map(|c| movable_cuts(&c.body)).sum(),
        _ => {
            let (from, _) = op.functor_swap().expect("remaining ops are functor swaps");
            clauses
                .iter()
                .flat_map(body_nodes)
                .filter(|t| functor_is(t, from, 2).is_some())
                .count()
        }
    }
}
