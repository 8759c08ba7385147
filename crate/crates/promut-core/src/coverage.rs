//! Sub-goal, clause and predicate coverage from baseline trace events.
//!
//! A sub-goal is covered when it emitted an exit port at least once during
//! the suite run; a clause is covered when all its sub-goals are; a
//! predicate is covered when all its clauses are. Redo and fail ports do
//! not contribute.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::engine::trace::{CollectingSink, Port};
use crate::engine::{solve, Budget};
use crate::harness::TestCase;
use crate::mutate::subgoal_inventory;
use crate::runner::CampaignReport;
use crate::syntax::{PredId, Program, TermPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TierCoverage {
    pub covered: usize,
    pub total: usize,
}

impl TierCoverage {
    /// Percentage rounded to two decimals; `None` when the tier is empty.
    pub fn pct(&self) -> Option<f64> {
        if self.total == 0 {
            None
        } else {
            Some(round2(100.0 * self.covered as f64 / self.total as f64))
        }
    }
}

pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// An uncovered sub-goal: predicate, clause ordinal, path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UncoveredSubgoal {
    pub predicate: PredId,
    pub clause: usize,
    pub path: TermPath,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub subgoal: TierCoverage,
    pub clause: TierCoverage,
    pub predicate: TierCoverage,
    pub uncovered: Vec<UncoveredSubgoal>,
}

/// Runs every case (passing or not) and accumulates exit ports. Exit sets
/// from separate tests merge commutatively, so accumulation order is
/// irrelevant.
pub fn measure(program: &Program, cases: &[TestCase], budget: &Budget) -> CoverageReport {
    let mut exits: BTreeSet<(PredId, usize, Vec<usize>)> = BTreeSet::new();
    for case in cases {
        let mut sink = CollectingSink::default();
        let _ = solve(program, &case.goal, budget, Some(&mut sink));
        for event in sink.events {
            if event.port != Port::Exit {
                continue;
            }
            // Prelude subjects are not part of the program under
            // measurement.
            if !program.defines(&event.subject.pred) {
                continue;
            }
            exits.insert((
                event.subject.pred,
                event.subject.clause,
                event.subject.path.steps().to_vec(),
            ));
        }
    }
    coverage_from_exits(program, &exits)
}

/// Derives the three tiers from a set of exited sub-goals.
pub fn coverage_from_exits(
    program: &Program,
    exits: &BTreeSet<(PredId, usize, Vec<usize>)>,
) -> CoverageReport {
    let mut subgoal_total = 0;
    let mut subgoal_covered = 0;
    let mut clause_covered = 0;
    let mut uncovered = Vec::new();
    let mut covered_clauses: BTreeSet<(PredId, usize)> = BTreeSet::new();

    for clause in program.clauses() {
        let pred = clause.pred_id();
        let mut all = true;
        for path in subgoal_inventory(clause) {
            subgoal_total += 1;
            let key = (pred.clone(), clause.index, path.steps().to_vec());
            if exits.contains(&key) {
                subgoal_covered += 1;
            } else {
                all = false;
                uncovered.push(UncoveredSubgoal {
                    predicate: pred.clone(),
                    clause: clause.index,
                    path,
                });
            }
        }
        if all {
            clause_covered += 1;
            covered_clauses.insert((pred, clause.index));
        }
    }

    let preds = program.predicates_in_order();
    let predicate_covered = preds
        .iter()
        .filter(|pred| {
            program
                .clauses_of(pred)
                .expect("predicates_in_order comes from the index")
                .iter()
                .all(|&i| {
                    let clause = &program.clauses()[i];
                    covered_clauses.contains(&(clause.pred_id(), clause.index))
                })
        })
        .count();

    CoverageReport {
        subgoal: TierCoverage { covered: subgoal_covered, total: subgoal_total },
        clause: TierCoverage { covered: clause_covered, total: program.clause_count() },
        predicate: TierCoverage { covered: predicate_covered, total: preds.len() },
        uncovered,
    }
}

/// One comparison row: program size stats plus the four coverage
/// percentages. Exactly these seven fields appear in the JSON object.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub loc: usize,
    pub predicates: usize,
    pub clauses: usize,
    pub clause_coverage: Option<f64>,
    pub predicate_coverage: Option<f64>,
    pub subgoal_coverage: Option<f64>,
    pub mutation_coverage: Option<f64>,
}

/// Builds the comparison row for one program + suite, assuming both
/// reports were computed over them.
pub fn compare(
    coverage: &CoverageReport,
    campaign: &CampaignReport,
    source: &str,
    program: &Program,
) -> ComparisonRow {
    ComparisonRow {
        loc: count_loc(source),
        predicates: program.predicates_in_order().len(),
        clauses: program.clause_count(),
        clause_coverage: coverage.clause.pct(),
        predicate_coverage: coverage.predicate.pct(),
        subgoal_coverage: coverage.subgoal.pct(),
        mutation_coverage: campaign.mutation_score.map(|s| round2(s * 100.0)),
    }
}

/// Lines that contain code: non-blank and not comment-only.
pub fn count_loc(source: &str) -> usize {
    source
        .lines()
        .filter(|line| {
            let trimmed = line.trim();
            !trimmed.is_empty() && !trimmed.starts_with('%')
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::parse_suite;
    use crate::syntax::parse_program;

    const MIN: &str = "min(A, B, A) :- A < B, !.\nmin(A, B, B).";

    fn measure_min(suite: &str) -> CoverageReport {
        let program = parse_program(MIN).unwrap();
        let cases = parse_suite(suite).unwrap();
        measure(&program, &cases, &Budget::default())
    }

    #[test]
    fn both_tests_give_full_coverage() {
        let report = measure_min(
            ":- begin_tests(min).\ntest(l) :- min(1, 2, 1).\ntest(r) :- min(2, 1, 1).\n:- end_tests(min).\n",
        );
        assert_eq!(report.subgoal, TierCoverage { covered: 3, total: 3 });
        assert_eq!(report.clause, TierCoverage { covered: 2, total: 2 });
        assert_eq!(report.predicate, TierCoverage { covered: 1, total: 1 });
        assert_eq!(report.subgoal.pct(), Some(100.0));
        assert!(report.uncovered.is_empty());
    }

    #[test]
    fn single_test_leaves_second_clause_uncovered() {
        let report = measure_min(
            ":- begin_tests(min).\ntest(l) :- min(1, 2, 1).\n:- end_tests(min).\n",
        );
        assert!(report.subgoal.pct().unwrap() < 100.0);
        assert_eq!(report.clause.pct(), Some(50.0));
        assert_eq!(report.predicate.pct(), Some(0.0));
        assert_eq!(report.uncovered.len(), 1);
        assert_eq!(report.uncovered[0].clause, 1);
    }

    #[test]
    fn empty_suite_covers_nothing_but_totals_stand() {
        let report = measure_min("");
        assert_eq!(report.subgoal.covered, 0);
        assert_eq!(report.subgoal.total, 3);
        assert_eq!(report.clause.pct(), Some(0.0));
    }

    #[test]
    fn coverage_counts_exits_from_failing_tests_too() {
        // The test fails overall, but `<` exits before `!` fails the goal.
        let program = parse_program("p(X) :- X < 10, fail.").unwrap();
        let cases = parse_suite(
            ":- begin_tests(a).\ntest(t) :- p(1).\n:- end_tests(a).\n",
        )
        .unwrap();
        let report = measure(&program, &cases, &Budget::default());
        assert_eq!(report.subgoal.covered, 1);
        assert_eq!(report.subgoal.total, 2);
    }

    #[test]
    fn facts_are_covered_on_head_exit() {
        let program = parse_program("f(a).\nf(b).").unwrap();
        let cases = parse_suite(
            ":- begin_tests(a).\ntest(t) :- f(a).\n:- end_tests(a).\n",
        )
        .unwrap();
        let report = measure(&program, &cases, &Budget::default());
        assert_eq!(report.clause, TierCoverage { covered: 1, total: 2 });
        assert_eq!(report.predicate.pct(), Some(0.0));
    }

    #[test]
    fn adding_tests_is_monotone() {
        let one = measure_min(
            ":- begin_tests(min).\ntest(l) :- min(1, 2, 1).\n:- end_tests(min).\n",
        );
        let two = measure_min(
            ":- begin_tests(min).\ntest(l) :- min(1, 2, 1).\ntest(r) :- min(2, 1, 1).\n:- end_tests(min).\n",
        );
        assert!(two.subgoal.covered >= one.subgoal.covered);
        assert!(two.clause.covered >= one.clause.covered);
        assert!(two.predicate.covered >= one.predicate.covered);
    }

    #[test]
    fn tier_implications_hold() {
        let report = measure_min(
            ":- begin_tests(min).\ntest(l) :- min(1, 2, 1).\n:- end_tests(min).\n",
        );
        // predicate covered => all clauses covered => all sub-goals covered.
        if report.predicate.covered == report.predicate.total {
            assert_eq!(report.clause.covered, report.clause.total);
        }
        if report.clause.covered == report.clause.total {
            assert_eq!(report.subgoal.covered, report.subgoal.total);
        }
    }

    #[test]
    fn loc_skips_blanks_and_comments() {
        assert_eq!(count_loc("a.\n\n% note\nb :- c.\n"), 2);
    }
}
