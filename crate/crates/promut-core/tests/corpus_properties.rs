//! Corpus-wide invariants: mutant well-formedness, trace discipline,
//! coverage monotonicity, suite isolation, and restoration.

mod common;

use std::collections::HashMap;

use common::{load_corpus, load_fixture};
use promut_core::coverage::measure;
use promut_core::engine::trace::{CollectingSink, Port};
use promut_core::engine::{solve, Budget, SolveOutcome};
use promut_core::harness::run_suite;
use promut_core::mutate::{apply, enumerate_sites, OperatorId, SiteTarget};
use promut_core::runner::{run_campaign, RunnerConfig};
use promut_core::syntax::printer::print_clause;
use promut_core::syntax::{parse_program, PredId, Program};

fn clause_lines(program: &Program) -> Vec<(PredId, String)> {
    program
        .clauses()
        .iter()
        .map(|c| (c.pred_id(), print_clause(c)))
        .collect()
}

#[test]
fn mutants_reparse_and_differ_only_inside_their_predicate() {
    for fixture in load_corpus() {
        let sites = enumerate_sites(&fixture.program, &OperatorId::ALL);
        assert!(!sites.is_empty(), "{}", fixture.name);
        let original_lines = clause_lines(&fixture.program);
        for site in &sites {
            let mutant = apply(&fixture.program, site).unwrap();

            // Syntactic nonequivalence.
            assert_ne!(mutant.program, fixture.program, "{}: {site:?}", fixture.name);

            // Re-parse closure.
            let printed = promut_core::print_program(&mutant.program);
            let reparsed = parse_program(&printed).unwrap_or_else(|e| {
                panic!("{}: mutant of {site:?} must re-parse: {e}\n{printed}", fixture.name)
            });
            assert_eq!(reparsed, mutant.program, "{}: {site:?}", fixture.name);

            // Single-change property: all clauses outside the mutated
            // predicate are untouched and in order.
            let target = match &site.target {
                SiteTarget::Predicate(pred) => pred.clone(),
                SiteTarget::Node { clause, .. } => {
                    fixture.program.clauses()[*clause].pred_id()
                }
            };
            let mutated_lines = clause_lines(&mutant.program);
            let outside = |lines: &[(PredId, String)]| {
                lines
                    .iter()
                    .filter(|(p, _)| p != &target)
                    .cloned()
                    .collect::<Vec<_>>()
            };
            assert_eq!(
                outside(&original_lines),
                outside(&mutated_lines),
                "{}: {site:?} touched another predicate",
                fixture.name
            );
            if let SiteTarget::Node { .. } = site.target {
                let changed = original_lines
                    .iter()
                    .zip(&mutated_lines)
                    .filter(|(a, b)| a != b)
                    .count();
                assert_eq!(changed, 1, "{}: {site:?} changed {changed} clauses", fixture.name);
            }
        }
    }
}

#[test]
fn enumeration_is_deterministic_across_calls() {
    for fixture in load_corpus() {
        let a = enumerate_sites(&fixture.program, &OperatorId::ALL);
        let b = enumerate_sites(&fixture.program, &OperatorId::ALL);
        assert_eq!(a, b, "{}", fixture.name);
    }
}

#[test]
fn predicate_index_is_derivable() {
    for fixture in load_corpus() {
        assert_eq!(fixture.program.rebuild_index(), *fixture.program.index());
        for site in enumerate_sites(&fixture.program, &OperatorId::ALL) {
            let mutant = apply(&fixture.program, &site).unwrap();
            assert_eq!(mutant.program.rebuild_index(), *mutant.program.index());
        }
    }
}

#[test]
fn suite_outcomes_are_independent_of_order() {
    for fixture in load_corpus() {
        let budget = Budget::default();
        let forward = run_suite(&fixture.program, &fixture.cases, &budget);
        let mut reversed_cases = fixture.cases.clone();
        reversed_cases.reverse();
        let backward = run_suite(&fixture.program, &reversed_cases, &budget);

        let index: HashMap<String, _> = backward
            .outcomes
            .iter()
            .map(|o| (o.case.label(), (o.verdict, o.steps_used)))
            .collect();
        for outcome in &forward.outcomes {
            let (verdict, steps) = index[&outcome.case.label()];
            assert_eq!(outcome.verdict, verdict, "{}", fixture.name);
            assert_eq!(outcome.steps_used, steps, "{}", fixture.name);
        }
    }
}

#[test]
fn trace_port_discipline_holds_per_subject() {
    for fixture in load_corpus() {
        for case in &fixture.cases {
            let mut sink = CollectingSink::default();
            let _ = solve(&fixture.program, &case.goal, &Budget::default(), Some(&mut sink));
            let mut by_subject: HashMap<String, Vec<Port>> = HashMap::new();
            let mut last_step = 0;
            for event in &sink.events {
                assert!(event.step >= last_step, "steps are monotone");
                last_step = event.step;
                by_subject
                    .entry(format!(
                        "{}#{}@{}",
                        event.subject.pred, event.subject.clause, event.subject.path
                    ))
                    .or_default()
                    .push(event.port);
            }
            for (subject, ports) in by_subject {
                let mut calls = 0i64;
                let mut exits = 0i64;
                let mut redos = 0i64;
                let mut fails = 0i64;
                assert_eq!(ports[0], Port::Call, "{subject} starts with call");
                for port in ports {
                    match port {
                        Port::Call => calls += 1,
                        Port::Exit => exits += 1,
                        Port::Redo => redos += 1,
                        Port::Fail => fails += 1,
                    }
                    assert!(exits <= calls, "{subject}: exit before call");
                    assert!(redos <= exits, "{subject}: redo before exit");
                    assert!(fails <= calls, "{subject}: fail before call");
                }
            }
        }
    }
}

#[test]
fn coverage_accumulation_is_monotone_in_the_suite() {
    for fixture in load_corpus() {
        let budget = Budget::default();
        let mut prev = measure(&fixture.program, &[], &budget);
        for k in 1..=fixture.cases.len() {
            let cur = measure(&fixture.program, &fixture.cases[..k], &budget);
            assert!(cur.subgoal.covered >= prev.subgoal.covered, "{}", fixture.name);
            assert!(cur.clause.covered >= prev.clause.covered, "{}", fixture.name);
            assert!(cur.predicate.covered >= prev.predicate.covered, "{}", fixture.name);
            prev = cur;
        }
        // Tier implications on the full suite.
        let full = prev;
        if full.predicate.covered == full.predicate.total {
            assert_eq!(full.clause.covered, full.clause.total, "{}", fixture.name);
        }
        if full.clause.covered == full.clause.total {
            assert_eq!(full.subgoal.covered, full.subgoal.total, "{}", fixture.name);
        }
    }
}

#[test]
fn classification_is_sound_under_fail_fast() {
    for fixture in load_corpus() {
        let fast = run_campaign(
            &fixture.program,
            &fixture.cases,
            &RunnerConfig { ops: OperatorId::ALL.to_vec(), ..RunnerConfig::default() },
        )
        .unwrap();
        let slow = run_campaign(
            &fixture.program,
            &fixture.cases,
            &RunnerConfig {
                ops: OperatorId::ALL.to_vec(),
                fail_fast_per_mutant: false,
                ..RunnerConfig::default()
            },
        )
        .unwrap();
        for (a, b) in fast.mutants.iter().zip(&slow.mutants) {
            assert_eq!(a.site, b.site, "{}", fixture.name);
            assert_eq!(a.status, b.status, "{}: {:?}", fixture.name, a.site);
        }
        assert_eq!(fast.totals, slow.totals, "{}", fixture.name);
    }
}

#[test]
fn campaign_restoration_reproduces_the_baseline() {
    for fixture in load_corpus() {
        let snapshot = fixture.program.clone();
        let config = RunnerConfig { ops: OperatorId::ALL.to_vec(), ..RunnerConfig::default() };
        let report = run_campaign(&fixture.program, &fixture.cases, &config).unwrap();
        assert_eq!(fixture.program, snapshot, "{}: program mutated in place", fixture.name);
        let again = promut_core::runner::baseline(&fixture.program, &fixture.cases, &config)
            .unwrap();
        assert_eq!(again.total_steps, report.baseline.total_steps, "{}", fixture.name);
        assert_eq!(again.all_green, report.baseline.all_green);
        let verdicts = |r: &promut_core::harness::SuiteRunResult| {
            r.outcomes.iter().map(|o| (o.case.label(), o.verdict, o.steps_used)).collect::<Vec<_>>()
        };
        assert_eq!(verdicts(&again), verdicts(&report.baseline), "{}", fixture.name);
    }
}

#[test]
fn step_budget_monotonicity_on_corpus_goals() {
    let fixture = load_fixture("rev");
    let goal = promut_core::parse_term_text("rev([1, 2, 3], R)").unwrap();
    let full = solve(&fixture.program, &goal, &Budget::steps(100_000), None);
    let SolveOutcome::Success(_) = full.outcome else { panic!() };
    for budget in (1..full.steps_used).step_by(3) {
        let partial = solve(&fixture.program, &goal, &Budget::steps(budget), None);
        assert!(
            matches!(partial.outcome, SolveOutcome::BudgetExhausted { .. }),
            "budget {budget} below {} must exhaust",
            full.steps_used
        );
    }
    let exact = solve(&fixture.program, &goal, &Budget::steps(full.steps_used), None);
    assert_eq!(exact.outcome, full.outcome);
}

#[test]
fn cut_pruning_no_redo_into_committed_alternatives() {
    // p :- q(X), !, r(X) with a failing r: after the cut exits, q's site
    // is never redone.
    let program = parse_program("q(1).\nq(2).\nq(3).\nr(99).\np :- q(X), !, r(X).").unwrap();
    let goal = promut_core::parse_term_text("p").unwrap();
    let mut sink = CollectingSink::default();
    let result = solve(&program, &goal, &Budget::default(), Some(&mut sink));
    assert_eq!(result.outcome, SolveOutcome::Failure);
    let cut_exit = sink
        .events
        .iter()
        .find(|e| e.port == Port::Exit && e.subject.path.steps() == [1, 1, 0])
        .expect("the cut exits")
        .step;
    let q_redos_after = sink
        .events
        .iter()
        .filter(|e| e.port == Port::Redo && e.subject.path.steps() == [1, 0] && e.step > cut_exit)
        .count();
    assert!(q_redos_after <= 1);
}
