//! SLD resolution with backtracking, cut, negation as failure and
//! arithmetic, under a deterministic step budget.
//!
//! The machine is iterative: a persistent goal list plus an explicit
//! choice-point stack, so deep recursion in the object program cannot
//! overflow the host stack and a runaway mutant is stopped by the budget,
//! not by the process dying.
//!
//! Test semantics: [`solve`] proves a goal once and reports the first
//! solution. One step is one clause resolution attempt or one builtin
//! call; control constructs (`,`, `;`, `->`) cost nothing.

pub mod arith;
pub mod bindings;
pub mod error;
pub mod trace;
pub mod unify;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use crate::syntax::{parse_program, PredId, Program, Term, TermKind, TermPath};

use arith::arith_eval;
use bindings::Bindings;
use error::EngineError;
use trace::{Port, Subject, TraceEvent, TraceSink};
use unify::unify;

/// Execution limits. The step budget is the deterministic, authoritative
/// limit; the wall-clock limit is a safety net checked every 1024 steps.
#[derive(Debug, Clone)]
pub struct Budget {
    pub max_steps: u64,
    pub wall_limit: Option<Duration>,
}

impl Budget {
    pub fn steps(max_steps: u64) -> Budget {
        Budget { max_steps: max_steps.max(1), wall_limit: None }
    }

    pub fn with_wall_limit(mut self, limit: Duration) -> Budget {
        self.wall_limit = Some(limit);
        self
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::steps(1_000_000)
    }
}

/// First-solution bindings for the query's named variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Solution {
    pub bindings: BTreeMap<String, Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Success(Solution),
    Failure,
    Error(EngineError),
    BudgetExhausted { steps_used: u64 },
}

/// Outcome plus cost, for timeout accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub outcome: SolveOutcome,
    pub steps_used: u64,
}

/// Builtin predicates; user clauses can never shadow these.
pub const BUILTINS: &[(&str, usize)] = &[
    ("true", 0),
    ("fail", 0),
    ("false", 0),
    ("!", 0),
    (",", 2),
    (";", 2),
    ("->", 2),
    ("\\+", 1),
    ("call", 1),
    ("call", 2),
    ("call", 3),
    ("call", 4),
    ("=", 2),
    ("\\=", 2),
    ("==", 2),
    ("\\==", 2),
    ("=:=", 2),
    ("=\\=", 2),
    ("<", 2),
    (">", 2),
    ("=<", 2),
    (">=", 2),
    ("is", 2),
    ("sort", 2),
    ("var", 1),
    ("nonvar", 1),
];

pub fn is_builtin(name: &str, arity: usize) -> bool {
    BUILTINS.contains(&(name, arity))
}

/// The bundled list prelude; user predicates of the same name and arity
/// shadow it.
pub fn prelude() -> &'static Program {
    static PRELUDE: OnceLock<Program> = OnceLock::new();
    PRELUDE.get_or_init(|| {
        parse_program(include_str!("prelude.pl")).expect("bundled prelude parses")
    })
}

/// Proves `goal` against `program` (plus the prelude), returning the first
/// solution's outcome. The program is never mutated; concurrent solves over
/// one shared program need no coordination.
pub fn solve(
    program: &Program,
    goal: &Term,
    budget: &Budget,
    sink: Option<&mut dyn TraceSink>,
) -> SolveResult {
    let mut machine = Machine {
        user: program,
        prelude: prelude(),
        store: Bindings::new(),
        cps: Vec::new(),
        cont: None,
        steps: 0,
        budget: budget.clone(),
        started: Instant::now(),
        sink,
        instances: Vec::new(),
        query_vars: Vec::new(),
    };
    let outcome = machine.run(goal);
    SolveResult { outcome, steps_used: machine.steps }
}

type Cont = Option<Rc<ContNode>>;

struct ContNode {
    item: GoalItem,
    next: Cont,
}

fn cons(item: GoalItem, next: Cont) -> Cont {
    Some(Rc::new(ContNode { item, next }))
}

/// Where a goal's text lives in the program, for trace subjects.
#[derive(Debug, Clone)]
struct Origin {
    pred: PredId,
    clause: usize,
    path: Vec<usize>,
}

impl Origin {
    fn child(&self, step: usize) -> Origin {
        let mut path = self.path.clone();
        path.push(step);
        Origin { pred: self.pred.clone(), clause: self.clause, path }
    }
}

#[derive(Clone)]
enum GoalItem {
    /// Prove a goal. `barrier` is the choice-point height a cut inside
    /// this goal truncates to.
    Solve { goal: Term, barrier: usize, origin: Option<Origin> },
    /// Emit the exit port for an instance.
    Exit { inst: usize },
    /// Commit: discard choice points above `height`.
    CutTo { height: usize },
    /// Inner goal of `\+` succeeded: the negation itself fails.
    NegFail { inst: Option<usize> },
}

struct ChoicePoint {
    cont: Cont,
    trail_mark: usize,
    kind: CpKind,
}

enum CpKind {
    /// Remaining clauses of a predicate call.
    Clauses { goal: Term, locs: Vec<usize>, next: usize, prelude: bool, inst: Option<usize> },
    /// Alternative continuation: right branch of `;` or the else branch.
    Alt,
    /// Bare if-then without an else: resuming simply fails.
    ThenFail,
    /// Inner goal of `\+` found no solution: the negation succeeds.
    NegSucceed { inst: Option<usize> },
    /// Runtime-constructed call exhausted all solutions.
    CallFail { inst: Option<usize> },
}

struct Instance {
    origin: Origin,
    exited: bool,
}

enum Flow {
    Continue,
    Backtrack,
}

enum Halt {
    Error(EngineError),
    Exhausted,
}

type Step = Result<Flow, Halt>;

struct Machine<'p, 's> {
    user: &'p Program,
    prelude: &'p Program,
    store: Bindings,
    cps: Vec<ChoicePoint>,
    cont: Cont,
    steps: u64,
    budget: Budget,
    started: Instant,
    sink: Option<&'s mut dyn TraceSink>,
    instances: Vec<Instance>,
    /// Original name -> fresh name for the query's named variables.
    query_vars: Vec<(String, String)>,
}

impl<'p, 's> Machine<'p, 's> {
    fn run(&mut self, goal: &Term) -> SolveOutcome {
        let (renamed, query_vars) = self.store.rename_query(goal);
        self.query_vars = query_vars;
        self.cont = cons(GoalItem::Solve { goal: renamed, barrier: 0, origin: None }, None);

        loop {
            let Some(node) = self.cont.take() else {
                return self.success();
            };
            self.cont = node.next.clone();
            let item = node.item.clone();
            drop(node);

            let step = match item {
                GoalItem::Solve { goal, barrier, origin } => self.dispatch(goal, barrier, origin),
                GoalItem::Exit { inst } => {
                    self.emit_exit(inst);
                    Ok(Flow::Continue)
                }
                GoalItem::CutTo { height } => {
                    self.cps.truncate(height);
                    Ok(Flow::Continue)
                }
                GoalItem::NegFail { inst } => {
                    if let Some(i) = inst {
                        self.emit(Port::Fail, i);
                    }
                    Ok(Flow::Backtrack)
                }
            };

            match step {
                Ok(Flow::Continue) => {}
                Ok(Flow::Backtrack) => match self.backtrack() {
                    Ok(true) => {}
                    Ok(false) => return SolveOutcome::Failure,
                    Err(halt) => return self.halt_outcome(halt),
                },
                Err(halt) => return self.halt_outcome(halt),
            }
        }
    }

    fn halt_outcome(&self, halt: Halt) -> SolveOutcome {
        match halt {
            Halt::Error(e) => SolveOutcome::Error(e),
            Halt::Exhausted => SolveOutcome::BudgetExhausted { steps_used: self.steps },
        }
    }

    fn success(&self) -> SolveOutcome {
        let reverse: HashMap<&str, &str> = self
            .query_vars
            .iter()
            .map(|(orig, fresh)| (fresh.as_str(), orig.as_str()))
            .collect();
        let mut bindings = BTreeMap::new();
        for (orig, fresh) in &self.query_vars {
            let resolved = self.store.resolve(&Term::var(fresh.clone()));
            let display = unrename(&resolved, &reverse);
            if !matches!(&display.kind, TermKind::Var { name, .. } if name == orig) {
                bindings.insert(orig.clone(), display);
            }
        }
        SolveOutcome::Success(Solution { bindings })
    }

    /// Accounts one resolution attempt or builtin call.
    fn step(&mut self) -> Result<(), Halt> {
        if self.steps >= self.budget.max_steps {
            return Err(Halt::Exhausted);
        }
        self.steps += 1;
        if self.steps.is_multiple_of(1024) {
            if let Some(limit) = self.budget.wall_limit {
                if self.started.elapsed() > limit {
                    return Err(Halt::Exhausted);
                }
            }
        }
        Ok(())
    }

    fn new_instance(&mut self, origin: Origin) -> usize {
        self.instances.push(Instance { origin, exited: false });
        self.instances.len() - 1
    }

    fn emit(&mut self, port: Port, inst: usize) {
        let Some(sink) = self.sink.as_deref_mut() else { return };
        let origin = &self.instances[inst].origin;
        sink.emit(TraceEvent {
            port,
            subject: Subject {
                pred: origin.pred.clone(),
                clause: origin.clause,
                path: TermPath::new(origin.path.clone()),
            },
            step: self.steps,
        });
    }

    fn emit_exit(&mut self, inst: usize) {
        self.instances[inst].exited = true;
        self.emit(Port::Exit, inst);
    }

    fn dispatch(&mut self, goal: Term, barrier: usize, origin: Option<Origin>) -> Step {
        match &goal.kind {
            TermKind::Var { .. } => {
                let walked = self.store.walk(&goal);
                if walked.is_var() {
                    return Err(Halt::Error(EngineError::instantiation(goal.span)));
                }
                // A variable body goal behaves like call/1: ports belong to
                // the variable's own site, and cut inside is local.
                self.meta_call(walked, origin)
            }
            TermKind::Int(_) | TermKind::Float(_) => Err(Halt::Error(EngineError::type_error(
                "callable",
                format!("{goal}"),
                goal.span,
            ))),
            TermKind::Atom(_) | TermKind::Compound { .. } => {
                let (name, arity) = goal.functor_arity().expect("callable");
                match (name, arity) {
                    (",", 2) => {
                        let [left, right] = take_two(goal);
                        let (lo, ro) = child_origins(&origin);
                        self.cont = cons(
                            GoalItem::Solve { goal: left, barrier, origin: lo },
                            cons(GoalItem::Solve { goal: right, barrier, origin: ro }, self.cont.take()),
                        );
                        Ok(Flow::Continue)
                    }
                    (";", 2) => {
                        let is_ite = matches!(
                            &goal.args()[0].kind,
                            TermKind::Compound { functor, args } if functor == "->" && args.len() == 2
                        );
                        let [left, right] = take_two(goal);
                        let (lo, ro) = child_origins(&origin);
                        if is_ite {
                            let [cond, then] = take_two(left);
                            let (co, to) = child_origins(&lo);
                            self.if_then_else(cond, co, then, to, Some((right, ro)), barrier)
                        } else {
                            let mark = self.store.mark();
                            self.cps.push(ChoicePoint {
                                cont: cons(
                                    GoalItem::Solve { goal: right, barrier, origin: ro },
                                    self.cont.clone(),
                                ),
                                trail_mark: mark,
                                kind: CpKind::Alt,
                            });
                            self.cont = cons(
                                GoalItem::Solve { goal: left, barrier, origin: lo },
                                self.cont.take(),
                            );
                            Ok(Flow::Continue)
                        }
                    }
                    ("->", 2) => {
                        let [cond, then] = take_two(goal);
                        let (co, to) = child_origins(&origin);
                        self.if_then_else(cond, co, then, to, None, barrier)
                    }
                    _ => self.leaf(goal, barrier, origin),
                }
            }
        }
    }

    fn if_then_else(
        &mut self,
        cond: Term,
        cond_origin: Option<Origin>,
        then: Term,
        then_origin: Option<Origin>,
        else_branch: Option<(Term, Option<Origin>)>,
        barrier: usize,
    ) -> Step {
        let height = self.cps.len();
        let mark = self.store.mark();
        let (cont, kind) = match else_branch {
            Some((else_goal, else_origin)) => (
                cons(
                    GoalItem::Solve { goal: else_goal, barrier, origin: else_origin },
                    self.cont.clone(),
                ),
                CpKind::Alt,
            ),
            None => (None, CpKind::ThenFail),
        };
        self.cps.push(ChoicePoint { cont, trail_mark: mark, kind });
        // The condition runs with a local cut barrier above the else
        // alternative; its first solution commits via CutTo.
        self.cont = cons(
            GoalItem::Solve { goal: cond, barrier: height + 1, origin: cond_origin },
            cons(
                GoalItem::CutTo { height },
                cons(
                    GoalItem::Solve { goal: then, barrier, origin: then_origin },
                    self.cont.take(),
                ),
            ),
        );
        Ok(Flow::Continue)
    }

    /// A non-control goal: cut, builtin, or predicate call.
    fn leaf(&mut self, goal: Term, barrier: usize, origin: Option<Origin>) -> Step {
        let inst = origin.map(|o| Machine::new_instance(self, o));
        if let Some(i) = inst {
            self.emit(Port::Call, i);
        }
        let (name, arity) = goal.functor_arity().expect("callable");
        match (name, arity) {
            ("!", 0) => {
                self.step()?;
                self.cps.truncate(barrier);
                if let Some(i) = inst {
                    self.emit_exit(i);
                }
                Ok(Flow::Continue)
            }
            ("true", 0) => {
                self.step()?;
                if let Some(i) = inst {
                    self.emit_exit(i);
                }
                Ok(Flow::Continue)
            }
            ("fail", 0) | ("false", 0) => {
                self.step()?;
                if let Some(i) = inst {
                    self.emit(Port::Fail, i);
                }
                Ok(Flow::Backtrack)
            }
            ("\\+", 1) => {
                self.step()?;
                let [inner] = take_one(goal);
                self.negation(inner, inst)
            }
            ("call", n @ 1..=4) => {
                self.step()?;
                self.call_n(goal, n, inst)
            }
            _ if is_builtin(name, arity) => {
                self.step()?;
                match self.det_builtin(&goal) {
                    Ok(true) => {
                        if let Some(i) = inst {
                            self.emit_exit(i);
                        }
                        Ok(Flow::Continue)
                    }
                    Ok(false) => {
                        if let Some(i) = inst {
                            self.emit(Port::Fail, i);
                        }
                        Ok(Flow::Backtrack)
                    }
                    Err(e) => Err(Halt::Error(e)),
                }
            }
            _ => self.predicate_call(goal, inst),
        }
    }

    fn negation(&mut self, inner: Term, inst: Option<usize>) -> Step {
        let height = self.cps.len();
        self.cps.push(ChoicePoint {
            cont: self.cont.clone(),
            trail_mark: self.store.mark(),
            kind: CpKind::NegSucceed { inst },
        });
        self.cont = cons(
            GoalItem::Solve { goal: inner, barrier: height + 1, origin: None },
            cons(GoalItem::CutTo { height }, cons(GoalItem::NegFail { inst }, None)),
        );
        Ok(Flow::Continue)
    }

    fn call_n(&mut self, goal: Term, _n: usize, inst: Option<usize>) -> Step {
        let span = goal.span;
        let TermKind::Compound { mut args, .. } = goal.kind else {
            unreachable!("call/1..4 is always a compound");
        };
        let extra: Vec<Term> = args.drain(1..).collect();
        let target = args.pop().expect("call has a first argument");
        let walked = self.store.walk(&target);
        let constructed = match walked.kind {
            TermKind::Var { .. } => return Err(Halt::Error(EngineError::instantiation(span))),
            TermKind::Int(_) | TermKind::Float(_) => {
                return Err(Halt::Error(EngineError::type_error(
                    "callable",
                    format!("{walked}"),
                    span,
                )))
            }
            TermKind::Atom(name) => {
                if extra.is_empty() {
                    Term { kind: TermKind::Atom(name), span: walked.span }
                } else {
                    Term { kind: TermKind::Compound { functor: name, args: extra }, span: walked.span }
                }
            }
            TermKind::Compound { functor, args: mut inner } => {
                inner.extend(extra);
                Term { kind: TermKind::Compound { functor, args: inner }, span: walked.span }
            }
        };
        self.meta_call_constructed(constructed, inst)
    }

    fn meta_call(&mut self, walked: Term, origin: Option<Origin>) -> Step {
        let inst = origin.map(|o| Machine::new_instance(self, o));
        if let Some(i) = inst {
            self.emit(Port::Call, i);
        }
        self.step()?;
        self.meta_call_constructed(walked, inst)
    }

    /// Runs a runtime-constructed goal with a local cut barrier, emitting
    /// the wrapper's exit and fail ports around it.
    fn meta_call_constructed(&mut self, target: Term, inst: Option<usize>) -> Step {
        let height = self.cps.len();
        self.cps.push(ChoicePoint {
            cont: None,
            trail_mark: self.store.mark(),
            kind: CpKind::CallFail { inst },
        });
        let rest = match inst {
            Some(i) => cons(GoalItem::Exit { inst: i }, self.cont.clone()),
            None => self.cont.clone(),
        };
        self.cont = cons(
            GoalItem::Solve { goal: target, barrier: height + 1, origin: None },
            rest,
        );
        Ok(Flow::Continue)
    }

    fn predicate_call(&mut self, goal: Term, inst: Option<usize>) -> Step {
        let (name, arity) = goal.functor_arity().expect("callable");
        let pred = PredId::new(name, arity);
        let (locs, from_prelude) = match self.user.clauses_of(&pred) {
            Some(locs) => (locs.to_vec(), false),
            None => match self.prelude.clauses_of(&pred) {
                Some(locs) => (locs.to_vec(), true),
                None => {
                    self.step()?;
                    return Err(Halt::Error(EngineError::existence(pred, goal.span)));
                }
            },
        };
        self.cps.push(ChoicePoint {
            cont: self.cont.clone(),
            trail_mark: self.store.mark(),
            kind: CpKind::Clauses { goal, locs, next: 0, prelude: from_prelude, inst },
        });
        match self.try_clauses()? {
            true => Ok(Flow::Continue),
            false => Ok(Flow::Backtrack),
        }
    }

    fn backtrack(&mut self) -> Result<bool, Halt> {
        loop {
            let Some(cp) = self.cps.last() else {
                return Ok(false);
            };
            let trail_mark = cp.trail_mark;
            self.store.undo_to(trail_mark);
            match &cp.kind {
                CpKind::Alt => {
                    let cp = self.cps.pop().expect("just observed");
                    self.cont = cp.cont;
                    return Ok(true);
                }
                CpKind::ThenFail => {
                    self.cps.pop();
                }
                CpKind::NegSucceed { inst } => {
                    let inst = *inst;
                    let cp = self.cps.pop().expect("just observed");
                    if let Some(i) = inst {
                        self.emit_exit(i);
                    }
                    self.cont = cp.cont;
                    return Ok(true);
                }
                CpKind::CallFail { inst } => {
                    let inst = *inst;
                    self.cps.pop();
                    if let Some(i) = inst {
                        self.emit(Port::Fail, i);
                    }
                }
                CpKind::Clauses { .. } => {
                    if self.try_clauses()? {
                        return Ok(true);
                    }
                }
            }
        }
    }

    /// Tries the remaining clauses of the top choice point. Returns false
    /// (and pops it) when exhausted.
    fn try_clauses(&mut self) -> Result<bool, Halt> {
        loop {
            let top = self.cps.len() - 1;
            let (goal, loc, prelude, inst) = {
                let ChoicePoint { kind, .. } = &mut self.cps[top];
                let CpKind::Clauses { goal, locs, next, prelude, inst } = kind else {
                    unreachable!("try_clauses runs on a Clauses choice point");
                };
                if *next >= locs.len() {
                    let inst = *inst;
                    self.cps.pop();
                    if let Some(i) = inst {
                        self.emit(Port::Fail, i);
                    }
                    return Ok(false);
                }
                let loc = locs[*next];
                *next += 1;
                (goal.clone(), loc, *prelude, *inst)
            };

            self.step()?;
            if let Some(i) = inst {
                if self.instances[i].exited {
                    self.instances[i].exited = false;
                    self.emit(Port::Redo, i);
                }
            }

            let db = if prelude { self.prelude } else { self.user };
            let clause = &db.clauses()[loc];
            let (head, body) = self.store.rename_pair(&clause.head, &clause.body);
            if unify(&mut self.store, &goal, &head) {
                let body_origin = if self.sink.is_some() {
                    Some(Origin { pred: clause.pred_id(), clause: clause.index, path: vec![1] })
                } else {
                    None
                };
                let cp_cont = self.cps[top].cont.clone();
                let rest = match inst {
                    Some(i) => cons(GoalItem::Exit { inst: i }, cp_cont),
                    None => cp_cont,
                };
                // A cut in the body truncates to `top`, discarding this
                // clause choice point and everything the body created.
                self.cont = cons(
                    GoalItem::Solve { goal: body, barrier: top, origin: body_origin },
                    rest,
                );
                return Ok(true);
            }
        }
    }

    /// Deterministic builtins: true on success, false on failure.
    fn det_builtin(&mut self, goal: &Term) -> Result<bool, EngineError> {
        let (name, arity) = goal.functor_arity().expect("callable");
        let args = goal.args();
        match (name, arity) {
            ("=", 2) => Ok(unify(&mut self.store, &args[0], &args[1])),
            ("\\=", 2) => {
                let mark = self.store.mark();
                if unify(&mut self.store, &args[0], &args[1]) {
                    self.store.undo_to(mark);
                    Ok(false)
                } else {
                    Ok(true)
                }
            }
            ("==", 2) | ("\\==", 2) => {
                let a = self.store.resolve(&args[0]);
                let b = self.store.resolve(&args[1]);
                let equal = compare_terms(&a, &b) == Ordering::Equal;
                Ok(if name == "==" { equal } else { !equal })
            }
            ("=:=", 2) | ("=\\=", 2) | ("<", 2) | (">", 2) | ("=<", 2) | (">=", 2) => {
                let a = arith_eval(&self.store, &args[0])?;
                let b = arith_eval(&self.store, &args[1])?;
                let Some(ord) = a.compare(&b) else {
                    return Ok(false); // NaN comparisons fail
                };
                Ok(match name {
                    "=:=" => ord == Ordering::Equal,
                    "=\\=" => ord != Ordering::Equal,
                    "<" => ord == Ordering::Less,
                    ">" => ord == Ordering::Greater,
                    "=<" => ord != Ordering::Greater,
                    ">=" => ord != Ordering::Less,
                    _ => unreachable!(),
                })
            }
            ("is", 2) => {
                let value = arith_eval(&self.store, &args[1])?;
                Ok(unify(&mut self.store, &args[0], &value.into_term().with_span(goal.span)))
            }
            ("var", 1) => Ok(self.store.walk(&args[0]).is_var()),
            ("nonvar", 1) => Ok(!self.store.walk(&args[0]).is_var()),
            ("sort", 2) => self.sort_builtin(goal),
            _ => unreachable!("non-deterministic builtins are handled in leaf()"),
        }
    }

    /// `sort/2`: sorts by the standard order of terms and removes
    /// duplicates.
    fn sort_builtin(&mut self, goal: &Term) -> Result<bool, EngineError> {
        let args = goal.args();
        let mut elems = Vec::new();
        let mut cursor = self.store.walk(&args[0]);
        let mut spine = 0usize;
        loop {
            match cursor.kind {
                TermKind::Atom(ref n) if n == "[]" => break,
                TermKind::Compound { ref functor, ref args } if functor == "." && args.len() == 2 => {
                    elems.push(self.store.resolve(&args[0]));
                    let tail = args[1].clone();
                    cursor = self.store.walk(&tail);
                }
                TermKind::Var { .. } => return Err(EngineError::instantiation(goal.span)),
                _ => {
                    return Err(EngineError::type_error("list", format!("{cursor}"), goal.span))
                }
            }
            spine += 1;
            if spine > 1_000_000 {
                return Err(EngineError::type_error("list", "cyclic list".to_string(), goal.span));
            }
        }
        elems.sort_by(compare_terms);
        elems.dedup_by(|a, b| compare_terms(a, b) == Ordering::Equal);
        Ok(unify(&mut self.store, &args[1], &Term::list(elems)))
    }
}

fn take_one(goal: Term) -> [Term; 1] {
    let TermKind::Compound { mut args, .. } = goal.kind else {
        unreachable!("arity checked by caller");
    };
    let a = args.pop().expect("arity 1");
    [a]
}

fn take_two(goal: Term) -> [Term; 2] {
    let TermKind::Compound { mut args, .. } = goal.kind else {
        unreachable!("arity checked by caller");
    };
    let b = args.pop().expect("arity 2");
    let a = args.pop().expect("arity 2");
    [a, b]
}

fn child_origins(origin: &Option<Origin>) -> (Option<Origin>, Option<Origin>) {
    match origin {
        Some(o) => (Some(o.child(0)), Some(o.child(1))),
        None => (None, None),
    }
}

fn unrename(term: &Term, reverse: &HashMap<&str, &str>) -> Term {
    match &term.kind {
        TermKind::Var { name, anonymous } => match reverse.get(name.as_str()) {
            Some(orig) => Term {
                kind: TermKind::Var { name: orig.to_string(), anonymous: *anonymous },
                span: term.span,
            },
            None => term.clone(),
        },
        TermKind::Compound { functor, args } => Term {
            kind: TermKind::Compound {
                functor: functor.clone(),
                args: args.iter().map(|a| unrename(a, reverse)).collect(),
            },
            span: term.span,
        },
        _ => term.clone(),
    }
}

/// Standard order of terms: Var < Number < Atom < Compound. Numbers
/// compare by value with floats before equal-valued integers; compounds by
/// arity, then functor, then arguments.
pub fn compare_terms(a: &Term, b: &Term) -> Ordering {
    compare_depth(a, b, 10_000)
}

fn compare_depth(a: &Term, b: &Term, depth: usize) -> Ordering {
    if depth == 0 {
        return Ordering::Equal; // rational terms: stop somewhere
    }
    fn rank(t: &Term) -> u8 {
        match t.kind {
            TermKind::Var { .. } => 0,
            TermKind::Int(_) | TermKind::Float(_) => 1,
            TermKind::Atom(_) => 2,
            TermKind::Compound { .. } => 3,
        }
    }
    match (&a.kind, &b.kind) {
        (TermKind::Var { name: x, .. }, TermKind::Var { name: y, .. }) => x.cmp(y),
        (TermKind::Int(x), TermKind::Int(y)) => x.cmp(y),
        (TermKind::Float(x), TermKind::Float(y)) => x.total_cmp(y),
        (TermKind::Int(_), TermKind::Float(_)) | (TermKind::Float(_), TermKind::Int(_)) => {
            let (xf, yf) = (num_value(a), num_value(b));
            match xf.partial_cmp(&yf) {
                Some(Ordering::Equal) | None => {
                    // Equal value: the float sorts first.
                    if matches!(a.kind, TermKind::Float(_)) {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    }
                }
                Some(ord) => ord,
            }
        }
        (TermKind::Atom(x), TermKind::Atom(y)) => x.cmp(y),
        (
            TermKind::Compound { functor: f, args: fa },
            TermKind::Compound { functor: g, args: ga },
        ) => fa
            .len()
            .cmp(&ga.len())
            .then_with(|| f.cmp(g))
            .then_with(|| {
                for (x, y) in fa.iter().zip(ga) {
                    let ord = compare_depth(x, y, depth - 1);
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
                Ordering::Equal
            }),
        _ => rank(a).cmp(&rank(b)),
    }
}

fn num_value(t: &Term) -> f64 {
    match &t.kind {
        TermKind::Int(v) => num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::INFINITY),
        TermKind::Float(v) => *v,
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::trace::CollectingSink;
    use super::*;
    use crate::syntax::parse_term_text;

    fn run(program: &str, goal: &str) -> SolveResult {
        let program = parse_program(program).unwrap();
        let goal = parse_term_text(goal).unwrap();
        solve(&program, &goal, &Budget::default(), None)
    }

    fn binding(result: &SolveResult, var: &str) -> Term {
        match &result.outcome {
            SolveOutcome::Success(s) => s.bindings.get(var).cloned().unwrap_or_else(|| {
                panic!("no binding for {var} in {:?}", s.bindings)
            }),
            other => panic!("expected success, got {other:?}"),
        }
    }

    const MIN: &str = "min(A, B, A) :- A < B, !.\nmin(A, B, B).";
    const MIN_MUTATED: &str = "min(A, B, A) :- A >= B, !.\nmin(A, B, B).";

    #[test]
    fn min_binds_first_solution() {
        let r = run(MIN, "min(1, 2, R)");
        assert_eq!(binding(&r, "R"), Term::int(1));
        let r = run(MIN, "min(2, 1, R)");
        assert_eq!(binding(&r, "R"), Term::int(1));
    }

    #[test]
    fn mutated_min_falls_through_to_second_clause() {
        let r = run(MIN_MUTATED, "min(1, 2, R)");
        assert_eq!(binding(&r, "R"), Term::int(2));
    }

    #[test]
    fn true_succeeds_in_one_step() {
        let r = run("", "true");
        assert!(matches!(r.outcome, SolveOutcome::Success(_)));
        assert_eq!(r.steps_used, 1);
    }

    #[test]
    fn budget_exhaustion_on_reversed_accumulator_loop() {
        let program = "add_to_list(L, E, C, R) :- CC is C - 1, LL = [E|L], add_to_list(LL, E, CC, R).\nadd_to_list(L, _, 0, L).";
        let program = parse_program(program).unwrap();
        let goal = parse_term_text("add_to_list([], a, 2, R)").unwrap();
        let r = solve(&program, &goal, &Budget::steps(10_000), None);
        assert_eq!(r.outcome, SolveOutcome::BudgetExhausted { steps_used: 10_000 });
        assert_eq!(r.steps_used, 10_000);
    }

    #[test]
    fn original_accumulator_terminates() {
        let program = "add_to_list(L, _, 0, L).\nadd_to_list(L, E, C, R) :- CC is C - 1, LL = [E|L], add_to_list(LL, E, CC, R).";
        let r = run(program, "add_to_list([], a, 2, R)");
        assert_eq!(
            binding(&r, "R"),
            Term::list(vec![Term::atom("a"), Term::atom("a")])
        );
    }

    #[test]
    fn cut_commits_to_first_clause() {
        let program = "p(1).\np(2).\nq(X) :- p(X), !, X > 1.";
        let r = run(program, "q(X)");
        assert_eq!(r.outcome, SolveOutcome::Failure);
        // Without the cut, backtracking finds p(2).
        let program = "p(1).\np(2).\nq(X) :- p(X), X > 1.";
        let r = run(program, "q(X)");
        assert_eq!(binding(&r, "X"), Term::int(2));
    }

    #[test]
    fn cut_is_local_to_called_goal() {
        let program = "p(1).\np(2).\nq(X) :- p(X), call((!, fail)).\nq(0).";
        let r = run(program, "q(X)");
        assert_eq!(binding(&r, "X"), Term::int(0));
    }

    #[test]
    fn negation_as_failure() {
        let program = "p(1).";
        assert!(matches!(run(program, "\\+ p(2)").outcome, SolveOutcome::Success(_)));
        assert_eq!(run(program, "\\+ p(1)").outcome, SolveOutcome::Failure);
        // Bindings made inside \+ do not leak.
        let r = run(program, "\\+ (p(X), X > 1)");
        assert!(matches!(r.outcome, SolveOutcome::Success(_)));
    }

    #[test]
    fn negation_with_cut_inside_stays_inside() {
        let r = run("", "\\+ ((!, fail))");
        assert!(matches!(r.outcome, SolveOutcome::Success(_)));
    }

    #[test]
    fn if_then_else_commits_on_first_condition_solution() {
        let program = "p(1).\np(2).";
        let r = run(program, "(p(X) -> R = X ; R = none)");
        assert_eq!(binding(&r, "R"), Term::int(1));
        let r = run(program, "(p(3) -> R = yes ; R = no)");
        assert_eq!(binding(&r, "R"), Term::atom("no"));
        // Bare if-then fails when the condition fails.
        let r = run(program, "(p(3) -> true)");
        assert_eq!(r.outcome, SolveOutcome::Failure);
        // Cut inside a condition is local: the else branch is still taken.
        let r = run(program, "((!, fail) -> R = yes ; R = no)");
        assert_eq!(binding(&r, "R"), Term::atom("no"));
    }

    #[test]
    fn undefined_predicate_is_existence_error() {
        let r = run("", "nothing_here(1)");
        match r.outcome {
            SolveOutcome::Error(e) => {
                assert_eq!(
                    e.kind,
                    error::ErrorKind::ExistenceError { pred: PredId::new("nothing_here", 1) }
                );
            }
            other => panic!("expected error, got {other:?}"),
        }
    }

    #[test]
    fn errors_propagate_out_of_negation_and_call() {
        assert!(matches!(run("", "\\+ missing(1)").outcome, SolveOutcome::Error(_)));
        assert!(matches!(run("", "call(missing, 1)").outcome, SolveOutcome::Error(_)));
    }

    #[test]
    fn prelude_provides_list_predicates() {
        let r = run("", "append([1, 2], [3], R)");
        assert_eq!(
            binding(&r, "R"),
            Term::list(vec![Term::int(1), Term::int(2), Term::int(3)])
        );
        let r = run("", "reverse([1, 2, 3], R)");
        assert_eq!(
            binding(&r, "R"),
            Term::list(vec![Term::int(3), Term::int(2), Term::int(1)])
        );
        let r = run("", "length([a, b], N)");
        assert_eq!(binding(&r, "N"), Term::int(2));
        assert!(matches!(run("", "member(b, [a, b])").outcome, SolveOutcome::Success(_)));
    }

    #[test]
    fn user_clauses_shadow_the_prelude() {
        let program = "append(x, y, z).";
        let r = run(program, "append(x, y, Z)");
        assert_eq!(binding(&r, "Z"), Term::atom("z"));
        assert_eq!(run(program, "append([], [1], [1])").outcome, SolveOutcome::Failure);
    }

    #[test]
    fn sort_sorts_by_standard_order_and_dedups() {
        let r = run("", "sort([2, 1, 2, a, 1.0], R)");
        assert_eq!(
            binding(&r, "R"),
            Term::list(vec![
                Term::float(1.0),
                Term::int(1),
                Term::int(2),
                Term::atom("a")
            ])
        );
    }

    #[test]
    fn call_n_appends_arguments() {
        let program = "gt(A, B) :- A > B.";
        assert!(matches!(run(program, "call(gt, 3, 1)").outcome, SolveOutcome::Success(_)));
        assert_eq!(run(program, "call(gt(1), 3)").outcome, SolveOutcome::Failure);
        assert!(matches!(run(program, "call(X, 1)").outcome, SolveOutcome::Error(_)));
    }

    #[test]
    fn variable_body_goal_behaves_like_call() {
        let program = "apply(G) :- G.\nok.";
        assert!(matches!(run(program, "apply(ok)").outcome, SolveOutcome::Success(_)));
        assert!(matches!(run(program, "apply(X)").outcome, SolveOutcome::Error(_)));
    }

    #[test]
    fn rational_bindings_do_not_crash_solution_extraction() {
        let r = run("", "X = f(X)");
        assert!(matches!(r.outcome, SolveOutcome::Success(_)));
    }

    #[test]
    fn step_budget_is_monotone() {
        let program = "p(1).\np(2).\nq(X) :- p(X), X > 1.";
        let goal = parse_term_text("q(X)").unwrap();
        let parsed = parse_program(program).unwrap();
        let full = solve(&parsed, &goal, &Budget::steps(1_000), None);
        let SolveOutcome::Success(_) = &full.outcome else { panic!() };
        for max in 1..full.steps_used {
            let partial = solve(&parsed, &goal, &Budget::steps(max), None);
            assert_eq!(
                partial.outcome,
                SolveOutcome::BudgetExhausted { steps_used: max },
                "budget {max} of {}",
                full.steps_used
            );
        }
        let exact = solve(&parsed, &goal, &Budget::steps(full.steps_used), None);
        assert_eq!(exact.outcome, full.outcome);
    }

    #[test]
    fn trace_ports_cover_min_single_test() {
        let program = parse_program(MIN).unwrap();
        let goal = parse_term_text("min(1, 2, 1)").unwrap();
        let mut sink = CollectingSink::default();
        let r = solve(&program, &goal, &Budget::default(), Some(&mut sink));
        assert!(matches!(r.outcome, SolveOutcome::Success(_)));
        let exits: Vec<_> = sink
            .events
            .iter()
            .filter(|e| e.port == Port::Exit)
            .map(|e| (e.subject.clause, e.subject.path.steps().to_vec()))
            .collect();
        // Clause 0's two sub-goals exit; clause 1 is never entered.
        assert!(exits.contains(&(0, vec![1, 0])));
        assert!(exits.contains(&(0, vec![1, 1])));
        assert!(!exits.iter().any(|(clause, _)| *clause == 1));
    }

    #[test]
    fn cut_prunes_choice_points_no_redo_after_cut_exit() {
        let program = "q(1).\nq(2).\nr(9).\np :- q(X), !, r(X).";
        let parsed = parse_program(program).unwrap();
        let goal = parse_term_text("p").unwrap();
        let mut sink = CollectingSink::default();
        let r = solve(&parsed, &goal, &Budget::default(), Some(&mut sink));
        assert_eq!(r.outcome, SolveOutcome::Failure);
        let cut_exit_step = sink
            .events
            .iter()
            .find(|e| e.port == Port::Exit && e.subject.path.steps() == [1, 1, 0])
            .map(|e| e.step)
            .expect("cut exits");
        let q_redos_after_cut = sink
            .events
            .iter()
            .filter(|e| {
                e.port == Port::Redo && e.subject.path.steps() == [1, 0] && e.step > cut_exit_step
            })
            .count();
        assert!(q_redos_after_cut <= 1, "q redone {q_redos_after_cut} times after cut");
    }

    #[test]
    fn redo_port_appears_on_backtracking() {
        let program = "q(1).\nq(2).\np(X) :- q(X), X > 1.";
        let parsed = parse_program(program).unwrap();
        let goal = parse_term_text("p(X)").unwrap();
        let mut sink = CollectingSink::default();
        let r = solve(&parsed, &goal, &Budget::default(), Some(&mut sink));
        assert!(matches!(r.outcome, SolveOutcome::Success(_)));
        assert!(sink.events.iter().any(|e| e.port == Port::Redo));
    }

    #[test]
    fn wall_clock_limit_is_a_safety_net() {
        let program = parse_program("loop :- loop.").unwrap();
        let goal = parse_term_text("loop").unwrap();
        let budget = Budget::steps(u64::MAX).with_wall_limit(std::time::Duration::ZERO);
        let r = solve(&program, &goal, &budget, None);
        // The expired wall clock is noticed at the first periodic check.
        assert!(matches!(r.outcome, SolveOutcome::BudgetExhausted { .. }));
        assert!(r.steps_used <= 2048);
    }

    #[test]
    fn error_spans_point_at_the_culprit_goal() {
        let source = "p :- q, missing_pred(1).";
        let program = parse_program(source).unwrap();
        let goal = parse_term_text("p").unwrap();
        let q_error = solve(&program, &goal, &Budget::default(), None);
        let SolveOutcome::Error(e) = q_error.outcome else { panic!() };
        // q is undefined and is reached first; its span covers `q`.
        assert_eq!(&source[e.span.start..e.span.end], "q");
    }

    #[test]
    fn comparison_type_error_carries_kind() {
        let r = run("", "1 < a");
        match r.outcome {
            SolveOutcome::Error(e) => assert!(matches!(e.kind, error::ErrorKind::TypeError { .. })),
            other => panic!("expected error, got {other:?}"),
        }
    }

    #[test]
    fn structural_equality_builtins() {
        assert!(matches!(run("", "f(X) == f(X)").outcome, SolveOutcome::Success(_)));
        assert_eq!(run("", "f(X) == f(Y)").outcome, SolveOutcome::Failure);
        assert!(matches!(run("", "f(X) \\== f(Y)").outcome, SolveOutcome::Success(_)));
        assert_eq!(run("", "1 == 1.0").outcome, SolveOutcome::Failure);
    }

    #[test]
    fn var_nonvar() {
        assert!(matches!(run("", "var(X)").outcome, SolveOutcome::Success(_)));
        assert_eq!(run("", "nonvar(X)").outcome, SolveOutcome::Failure);
        assert!(matches!(run("", "(X = a, nonvar(X))").outcome, SolveOutcome::Success(_)));
    }

    #[test]
    fn number_goal_is_a_type_error() {
        assert!(matches!(run("", "call(1)").outcome, SolveOutcome::Error(_)));
    }
}
