//! PlUnit-subset test suites: parsing and execution.
//!
//! Recognized syntax: `:- begin_tests(Name).` ... `:- end_tests(Name).`
//! blocks containing `test(Name) :- Body.` clauses, plus the `[fail]`
//! option for tests that must disprove their goal. Everything else is
//! rejected.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{solve, Budget, SolveOutcome};
use crate::syntax::parser::line_col;
use crate::syntax::{parse_items, print_term, Item, ParseError, Program, Span, Term, TermKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    /// The goal must be provable.
    Succeed,
    /// A negative test: the goal must finitely fail.
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestCase {
    pub suite: String,
    pub name: String,
    pub goal: Term,
    pub expectation: Expectation,
    pub span: Span,
}

impl TestCase {
    /// `suite:name`, the stable label used in reports.
    pub fn label(&self) -> String {
        format!("{}:{}", self.suite, self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
    Timeout,
}

impl Verdict {
    /// A killing verdict: the test did not pass and did not time out.
    /// Errors kill because an uncaught error means the test did not pass.
    pub fn kills(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Error)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestOutcome {
    pub case: TestCase,
    pub verdict: Verdict,
    pub steps_used: u64,
    pub wall_millis: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRunResult {
    pub outcomes: Vec<TestOutcome>,
    pub all_green: bool,
    pub total_steps: u64,
    pub total_wall_millis: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("duplicate test name {name:?} in suite {suite:?}")]
    DuplicateTestName { suite: String, name: String },
    #[error("unsupported test option {option} at {line}:{column} (only [fail] is supported)")]
    UnsupportedOption { option: String, line: usize, column: usize },
    #[error("invalid test file at {line}:{column}: {message}")]
    Structure { message: String, line: usize, column: usize },
}

fn structure(source: &str, offset: usize, message: impl Into<String>) -> SuiteError {
    let (line, column) = line_col(source, offset);
    SuiteError::Structure { message: message.into(), line, column }
}

/// Parses a test file into cases, in source order.
pub fn parse_suite(source: &str) -> Result<Vec<TestCase>, SuiteError> {
    let items = parse_items(source)?;
    let mut cases: Vec<TestCase> = Vec::new();
    let mut current: Option<String> = None;
    let mut last_offset = 0usize;

    for item in items {
        match item {
            Item::Directive(goal) => {
                last_offset = goal.span.start;
                match goal.functor_arity() {
                    Some(("begin_tests", 1)) => {
                        let TermKind::Atom(name) = &goal.args()[0].kind else {
                            return Err(structure(source, goal.span.start, "begin_tests expects an atom"));
                        };
                        if current.is_some() {
                            return Err(structure(source, goal.span.start, "nested begin_tests"));
                        }
                        current = Some(name.clone());
                    }
                    Some(("end_tests", 1)) => {
                        let TermKind::Atom(name) = &goal.args()[0].kind else {
                            return Err(structure(source, goal.span.start, "end_tests expects an atom"));
                        };
                        match current.take() {
                            Some(open) if &open == name => {}
                            Some(open) => {
                                return Err(structure(
                                    source,
                                    goal.span.start,
                                    format!("end_tests({name}) closes begin_tests({open})"),
                                ))
                            }
                            None => {
                                return Err(structure(source, goal.span.start, "end_tests without begin_tests"))
                            }
                        }
                    }
                    _ => {
                        return Err(structure(
                            source,
                            goal.span.start,
                            "only begin_tests/end_tests directives are allowed in test files",
                        ))
                    }
                }
            }
            Item::Clause { head, body } => {
                last_offset = head.span.start;
                let Some(suite) = current.clone() else {
                    return Err(structure(source, head.span.start, "clause outside a test block"));
                };
                let case = test_case(source, suite, head, body)?;
                if cases
                    .iter()
                    .any(|c| c.suite == case.suite && c.name == case.name)
                {
                    return Err(SuiteError::DuplicateTestName { suite: case.suite, name: case.name });
                }
                cases.push(case);
            }
        }
    }

    if let Some(open) = current {
        return Err(structure(source, last_offset, format!("missing end_tests({open})")));
    }
    Ok(cases)
}

fn test_case(source: &str, suite: String, head: Term, body: Term) -> Result<TestCase, SuiteError> {
    let bad_head =
        |offset: usize| structure(source, offset, "test blocks may only contain test/1 or test/2 clauses");
    let Some(("test", arity @ 1..=2)) = head.functor_arity() else {
        return Err(bad_head(head.span.start));
    };
    let TermKind::Atom(name) = &head.args()[0].kind else {
        return Err(structure(source, head.span.start, "test name must be an atom"));
    };
    let mut expectation = Expectation::Succeed;
    if arity == 2 {
        let options = &head.args()[1];
        let Some(opts) = options.as_proper_list() else {
            return Err(structure(source, options.span.start, "test options must be a list"));
        };
        for opt in opts {
            if opt.is_atom("fail") {
                expectation = Expectation::Fail;
            } else {
                let (line, column) = line_col(source, opt.span.start);
                return Err(SuiteError::UnsupportedOption {
                    option: print_term(opt),
                    line,
                    column,
                });
            }
        }
    }
    let span = head.span;
    Ok(TestCase { suite, name: name.clone(), goal: body, expectation, span })
}

/// Maps an engine outcome to a verdict under the case's expectation.
pub fn verdict_for(expectation: Expectation, outcome: &SolveOutcome) -> Verdict {
    match (expectation, outcome) {
        (Expectation::Succeed, SolveOutcome::Success(_)) => Verdict::Pass,
        (Expectation::Succeed, SolveOutcome::Failure) => Verdict::Fail,
        (Expectation::Fail, SolveOutcome::Failure) => Verdict::Pass,
        (Expectation::Fail, SolveOutcome::Success(_)) => Verdict::Fail,
        (_, SolveOutcome::Error(_)) => Verdict::Error,
        (_, SolveOutcome::BudgetExhausted { .. }) => Verdict::Timeout,
    }
}

/// Runs every case in order, each with a fresh budget; earlier failures
/// never skip later cases.
pub fn run_suite(program: &Program, cases: &[TestCase], budget: &Budget) -> SuiteRunResult {
    run_suite_stopping(program, cases, budget, false)
}

/// Like [`run_suite`], but optionally stops at the first killing verdict,
/// which is all a mutant classification needs.
pub fn run_suite_stopping(
    program: &Program,
    cases: &[TestCase],
    budget: &Budget,
    stop_on_kill: bool,
) -> SuiteRunResult {
    let mut outcomes = Vec::with_capacity(cases.len());
    for case in cases {
        let started = Instant::now();
        let result = solve(program, &case.goal, budget, None);
        let wall_millis = started.elapsed().as_millis() as u64;
        let verdict = verdict_for(case.expectation, &result.outcome);
        outcomes.push(TestOutcome {
            case: case.clone(),
            verdict,
            steps_used: result.steps_used,
            wall_millis,
        });
        if stop_on_kill && verdict.kills() {
            break;
        }
    }
    let all_green = outcomes.iter().all(|o| o.verdict == Verdict::Pass);
    let total_steps = outcomes.iter().map(|o| o.steps_used).sum();
    let total_wall_millis = outcomes.iter().map(|o| o.wall_millis).sum();
    SuiteRunResult { outcomes, all_green, total_steps, total_wall_millis }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::error::EngineError;
    use crate::engine::Solution;
    use crate::syntax::parse_program;

    const MIN_SUITE: &str = "\
:- begin_tests(min).
test(min_left) :- min(1, 2, 1).
test(min_right) :- min(2, 1, 1).
:- end_tests(min).
";

    #[test]
    fn parses_positive_and_negative_tests() {
        let cases = parse_suite(
            ":- begin_tests(t).\n\
             test(min_left) :- min(1, 2, 1).\n\
             test(not_empty, [fail]) :- is_empty([a]).\n\
             :- end_tests(t).\n",
        )
        .unwrap();
        assert_eq!(cases.len(), 2);
        assert_eq!(cases[0].expectation, Expectation::Succeed);
        assert_eq!(cases[1].expectation, Expectation::Fail);
        assert_eq!(cases[1].label(), "t:not_empty");
    }

    #[test]
    fn empty_file_is_an_empty_suite() {
        assert_eq!(parse_suite("").unwrap(), vec![]);
    }

    #[test]
    fn rejects_content_outside_blocks() {
        let err = parse_suite("helper(1).\n").unwrap_err();
        assert!(matches!(err, SuiteError::Structure { .. }));
        let err = parse_suite(":- begin_tests(a).\ntest(x).\n").unwrap_err();
        assert!(matches!(err, SuiteError::Structure { .. }), "{err}");
    }

    #[test]
    fn rejects_duplicates_and_unknown_options() {
        let err = parse_suite(
            ":- begin_tests(a).\ntest(x) :- true.\ntest(x) :- true.\n:- end_tests(a).\n",
        )
        .unwrap_err();
        assert!(matches!(err, SuiteError::DuplicateTestName { .. }));
        let err = parse_suite(
            ":- begin_tests(a).\ntest(x, [blocked]) :- true.\n:- end_tests(a).\n",
        )
        .unwrap_err();
        assert!(matches!(err, SuiteError::UnsupportedOption { .. }));
    }

    #[test]
    fn same_name_in_different_suites_is_fine() {
        let cases = parse_suite(
            ":- begin_tests(a).\ntest(x) :- true.\n:- end_tests(a).\n\
             :- begin_tests(b).\ntest(x) :- true.\n:- end_tests(b).\n",
        )
        .unwrap();
        assert_eq!(cases.len(), 2);
    }

    #[test]
    fn fact_tests_trivially_pass() {
        let cases =
            parse_suite(":- begin_tests(a).\ntest(t).\n:- end_tests(a).\n").unwrap();
        assert!(cases[0].goal.is_atom("true"));
    }

    #[test]
    fn verdict_table_is_total() {
        let success = SolveOutcome::Success(Solution::default());
        let failure = SolveOutcome::Failure;
        let error = SolveOutcome::Error(EngineError::instantiation(Span::synthetic()));
        let timeout = SolveOutcome::BudgetExhausted { steps_used: 1 };
        let table = [
            (Expectation::Succeed, &success, Verdict::Pass),
            (Expectation::Succeed, &failure, Verdict::Fail),
            (Expectation::Succeed, &error, Verdict::Error),
            (Expectation::Succeed, &timeout, Verdict::Timeout),
            (Expectation::Fail, &success, Verdict::Fail),
            (Expectation::Fail, &failure, Verdict::Pass),
            (Expectation::Fail, &error, Verdict::Error),
            (Expectation::Fail, &timeout, Verdict::Timeout),
        ];
        for (exp, outcome, want) in table {
            assert_eq!(verdict_for(exp, outcome), want);
        }
    }

    #[test]
    fn green_suite_on_min() {
        let program = parse_program("min(A, B, A) :- A < B, !.\nmin(A, B, B).").unwrap();
        let cases = parse_suite(MIN_SUITE).unwrap();
        let result = run_suite(&program, &cases, &Budget::default());
        assert!(result.all_green);
        assert_eq!(result.outcomes.len(), 2);
        assert!(result.total_steps > 0);
    }

    #[test]
    fn mutated_min_fails_min_left() {
        let program = parse_program("min(A, B, A) :- A >= B, !.\nmin(A, B, B).").unwrap();
        let cases = parse_suite(MIN_SUITE).unwrap();
        let result = run_suite(&program, &cases, &Budget::default());
        assert!(!result.all_green);
        assert_eq!(result.outcomes[0].verdict, Verdict::Fail);
        // All cases still execute.
        assert_eq!(result.outcomes.len(), 2);
    }

    #[test]
    fn empty_suite_is_vacuously_green() {
        let program = parse_program("").unwrap();
        let result = run_suite(&program, &[], &Budget::default());
        assert!(result.all_green);
        assert!(result.outcomes.is_empty());
    }

    #[test]
    fn stop_on_kill_short_circuits() {
        let program = parse_program("min(A, B, A) :- A >= B, !.\nmin(A, B, B).").unwrap();
        let cases = parse_suite(MIN_SUITE).unwrap();
        let result = run_suite_stopping(&program, &cases, &Budget::default(), true);
        assert_eq!(result.outcomes.len(), 1);
    }
}
