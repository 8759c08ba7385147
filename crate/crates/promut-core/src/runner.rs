//! Campaign orchestration: baseline run, per-mutant execution under
//! timeout, classification, and score computation.
//!
//! Mutants are independent, so workers share only the immutable original
//! program and the case list; results are folded in site-id order, which
//! makes reports identical regardless of the jobs setting.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::engine::Budget;
use crate::harness::{run_suite, run_suite_stopping, SuiteRunResult, TestCase, Verdict};
use crate::mutate::{apply, enumerate_sites, MutationSite, OperatorId, SiteTarget};
use crate::syntax::{PredId, Program};

#[derive(Debug, Clone)]
pub struct RunnerConfig {
    pub ops: Vec<OperatorId>,
    /// Constant part of the wall-clock timeout; the rest is twice the
    /// baseline wall time.
    pub timeout_constant_millis: u64,
    /// Hard per-test step ceiling.
    pub step_budget: u64,
    /// Constant part of the baseline-derived step allowance, mirroring the
    /// wall-clock rule in deterministic steps.
    pub step_timeout_floor: u64,
    pub jobs: usize,
    /// Stop a mutant's suite at the first killing verdict.
    pub fail_fast_per_mutant: bool,
}

impl Default for RunnerConfig {
    fn default() -> Self {
        RunnerConfig {
            ops: OperatorId::ALL.to_vec(),
            timeout_constant_millis: 1_000,
            step_budget: 1_000_000,
            step_timeout_floor: 10_000,
            jobs: 1,
            fail_fast_per_mutant: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MutantStatus {
    Dead,
    Alive,
    Timeout,
}

#[derive(Debug, Clone)]
pub struct MutantResult {
    pub site: MutationSite,
    /// The predicate the site lives in.
    pub predicate: PredId,
    pub status: MutantStatus,
    pub first_killing_test: Option<String>,
    pub steps_used: u64,
    /// Per-test verdicts in execution order (the full matrix when
    /// fail-fast is off).
    pub verdicts: Vec<(String, Verdict)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OperatorTally {
    pub alive: usize,
    pub dead: usize,
    pub timeout: usize,
}

#[derive(Debug, Clone)]
pub struct CampaignReport {
    /// Tallies per operator in catalogue order; only selected operators
    /// appear.
    pub per_operator: BTreeMap<OperatorId, OperatorTally>,
    pub totals: OperatorTally,
    /// `dead / (dead + alive)`; `None` when no mutant was classified dead
    /// or alive (undefined, distinct from 0).
    pub mutation_score: Option<f64>,
    pub baseline: SuiteRunResult,
    pub config: RunnerConfig,
    pub mutants: Vec<MutantResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunnerError {
    #[error("the test suite is empty; a mutation score over zero tests would be meaningless")]
    EmptySuite,
    #[error("baseline rejected: {} test(s) fail on the original program: {}", failing.len(), failing.join(", "))]
    BaselineRejected { failing: Vec<String> },
}

/// Runs the suite on the original program. Every test must pass, otherwise
/// the kill criterion on mutants would be meaningless.
pub fn baseline(
    program: &Program,
    cases: &[TestCase],
    config: &RunnerConfig,
) -> Result<SuiteRunResult, RunnerError> {
    if cases.is_empty() {
        return Err(RunnerError::EmptySuite);
    }
    let budget = Budget::steps(config.step_budget);
    let result = run_suite(program, cases, &budget);
    if !result.all_green {
        let failing = result
            .outcomes
            .iter()
            .filter(|o| o.verdict != Verdict::Pass)
            .map(|o| o.case.label())
            .collect();
        return Err(RunnerError::BaselineRejected { failing });
    }
    Ok(result)
}

/// The per-test budget mutants run under: steps are authoritative and
/// derived from the baseline cost, wall clock is a safety net.
pub fn mutant_budget(baseline: &SuiteRunResult, config: &RunnerConfig) -> Budget {
    let step_allowance = config
        .step_timeout_floor
        .saturating_add(baseline.total_steps.saturating_mul(2));
    let wall = config
        .timeout_constant_millis
        .saturating_add(baseline.total_wall_millis.saturating_mul(2));
    Budget::steps(config.step_budget.min(step_allowance))
        .with_wall_limit(Duration::from_millis(wall))
}

/// Classifies one suite run: a killing verdict (fail or error) makes the
/// mutant dead; otherwise any timeout makes it a timeout; otherwise it is
/// alive.
pub fn classify(result: &SuiteRunResult) -> (MutantStatus, Option<String>) {
    let first_kill = result
        .outcomes
        .iter()
        .find(|o| o.verdict.kills())
        .map(|o| o.case.label());
    if first_kill.is_some() {
        return (MutantStatus::Dead, first_kill);
    }
    if result.outcomes.iter().any(|o| o.verdict == Verdict::Timeout) {
        (MutantStatus::Timeout, None)
    } else {
        (MutantStatus::Alive, None)
    }
}

/// Full campaign: baseline, one run per enumerated site, aggregation.
pub fn run_campaign(
    program: &Program,
    cases: &[TestCase],
    config: &RunnerConfig,
) -> Result<CampaignReport, RunnerError> {
    let baseline_result = baseline(program, cases, config)?;
    let budget = mutant_budget(&baseline_result, config);
    let sites = enumerate_sites(program, &config.ops);

    let results = run_sites(program, cases, &sites, &budget, config);

    let mut per_operator: BTreeMap<OperatorId, OperatorTally> = config
        .ops
        .iter()
        .map(|&op| (op, OperatorTally::default()))
        .collect();
    let mut totals = OperatorTally::default();
    for result in &results {
        let tally = per_operator.entry(result.site.operator).or_default();
        let slot = match result.status {
            MutantStatus::Dead => {
                totals.dead += 1;
                &mut tally.dead
            }
            MutantStatus::Alive => {
                totals.alive += 1;
                &mut tally.alive
            }
            MutantStatus::Timeout => {
                totals.timeout += 1;
                &mut tally.timeout
            }
        };
        *slot += 1;
    }

    Ok(CampaignReport {
        mutation_score: score_from_counts(totals.dead, totals.alive),
        per_operator,
        totals,
        baseline: baseline_result,
        config: config.clone(),
        mutants: results,
    })
}

fn run_sites(
    program: &Program,
    cases: &[TestCase],
    sites: &[MutationSite],
    budget: &Budget,
    config: &RunnerConfig,
) -> Vec<MutantResult> {
    let site_predicate = |site: &MutationSite| -> PredId {
        match &site.target {
            SiteTarget::Predicate(pred) => pred.clone(),
            SiteTarget::Node { clause, .. } => program.clauses()[*clause].pred_id(),
        }
    };
    let run_one = |site: &MutationSite| -> MutantResult {
        let mutant = apply(program, site).expect("sites enumerated from this program");
        let result =
            run_suite_stopping(&mutant.program, cases, budget, config.fail_fast_per_mutant);
        let (status, first_killing_test) = classify(&result);
        MutantResult {
            site: site.clone(),
            predicate: site_predicate(site),
            status,
            first_killing_test,
            steps_used: result.total_steps,
            verdicts: result
                .outcomes
                .iter()
                .map(|o| (o.case.label(), o.verdict))
                .collect(),
        }
    };

    let jobs = config.jobs.max(1);
    if jobs == 1 || sites.len() <= 1 {
        return sites.iter().map(run_one).collect();
    }

    // Work-stealing over an atomic cursor; slots are filled by site id, so
    // aggregation order never depends on scheduling.
    let cursor = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<MutantResult>>> = Mutex::new(vec![None; sites.len()]);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(sites.len()) {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= sites.len() {
                    break;
                }
                let result = run_one(&sites[i]);
                slots.lock().expect("no panics while holding the lock")[i] = Some(result);
            });
        }
    });
    slots
        .into_inner()
        .expect("scope joined all workers")
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

/// `dead / (dead + alive)`, undefined when the denominator is zero.
/// Timeouts are excluded from both sides.
pub fn score_from_counts(dead: usize, alive: usize) -> Option<f64> {
    if dead + alive == 0 {
        None
    } else {
        Some(dead as f64 / (dead + alive) as f64)
    }
}

/// Recomputes the score from the report's own tallies.
pub fn score(report: &CampaignReport) -> Option<f64> {
    score_from_counts(report.totals.dead, report.totals.alive)
}
