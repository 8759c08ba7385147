//! Report rendering: the human table and the machine JSON.
//!
//! JSON output is stable-ordered: operators stay in catalogue order (an
//! array), all object keys are sorted, and nothing nondeterministic (wall
//! times in particular) is ever rendered, so byte-identical reports mean
//! identical campaigns.

use serde_json::{json, Value};

use crate::coverage::{ComparisonRow, CoverageReport};
use crate::mutate::{Mutant, SiteTarget};
use crate::runner::{CampaignReport, MutantResult};
use crate::syntax::PredId;

pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
}

#[derive(Debug, Clone)]
pub struct RenderedReport {
    pub format: ReportFormat,
    pub body: String,
    pub schema_version: String,
}

/// Formats a score as a two-decimal percentage, or `undefined` when no
/// mutant was classified dead or alive.
pub fn score_pct(score: Option<f64>) -> String {
    match score {
        Some(s) => format!("{:.2}%", s * 100.0),
        None => "undefined".to_string(),
    }
}

fn pct_text(p: Option<f64>) -> String {
    match p {
        Some(p) => format!("{p:.2}%"),
        None => "undefined".to_string(),
    }
}

/// The per-operator matrix: one row per selected operator in catalogue
/// order, a totals row, and the score line.
pub fn render_operator_matrix(report: &CampaignReport) -> RenderedReport {
    let mut body = String::new();
    body.push_str(&format!("{:<20} {:<10} {}\n", "operator", "alive/dead", "timeouts"));
    for (op, tally) in &report.per_operator {
        body.push_str(&format!(
            "{:<20} {:<10} ({})\n",
            op.label(),
            format!("{}/{}", tally.alive, tally.dead),
            tally.timeout
        ));
    }
    body.push_str(&format!(
        "{:<20} {:<10} ({})\n",
        "total",
        format!("{}/{}", report.totals.alive, report.totals.dead),
        report.totals.timeout
    ));
    body.push_str(&format!("score: {}\n", score_pct(report.mutation_score)));
    RenderedReport {
        format: ReportFormat::Table,
        body,
        schema_version: SCHEMA_VERSION.to_string(),
    }
}

/// Full campaign report in the requested format, optionally with the
/// coverage comparison attached.
pub fn render_campaign(
    report: &CampaignReport,
    format: ReportFormat,
    coverage: Option<&CoverageReport>,
    comparison: Option<&ComparisonRow>,
) -> RenderedReport {
    match format {
        ReportFormat::Table => {
            let mut body = format!(
                "baseline: {} tests, all green, {} steps\n\n",
                report.baseline.outcomes.len(),
                report.baseline.total_steps
            );
            body.push_str(&render_operator_matrix(report).body);
            if let Some(cov) = coverage {
                body.push('\n');
                body.push_str(&coverage_table(cov));
            }
            if let Some(row) = comparison {
                body.push('\n');
                body.push_str(&comparison_table(row));
            }
            RenderedReport { format, body, schema_version: SCHEMA_VERSION.to_string() }
        }
        ReportFormat::Json => {
            let mut root = campaign_json(report);
            if let Some(cov) = coverage {
                root["coverage"] = coverage_json(cov);
            }
            if let Some(row) = comparison {
                root["comparison"] = serde_json::to_value(row).expect("row serializes");
            }
            RenderedReport {
                format,
                body: pretty(&root),
                schema_version: SCHEMA_VERSION.to_string(),
            }
        }
    }
}

/// Serializing through `Value` sorts every object's keys.
fn pretty(value: &Value) -> String {
    let mut body = serde_json::to_string_pretty(value).expect("reports serialize");
    body.push('\n');
    body
}

pub fn campaign_json(report: &CampaignReport) -> Value {
    let per_operator: Vec<Value> = report
        .per_operator
        .iter()
        .map(|(op, tally)| {
            json!({
                "operator": op.cli_name(),
                "label": op.label(),
                "class": op.class(),
                "alive": tally.alive,
                "dead": tally.dead,
                "timeout": tally.timeout,
            })
        })
        .collect();
    let mutants: Vec<Value> = report.mutants.iter().map(mutant_json).collect();
    let baseline_outcomes: Vec<Value> = report
        .baseline
        .outcomes
        .iter()
        .map(|o| {
            json!({
                "test": o.case.label(),
                "verdict": o.verdict,
                "steps": o.steps_used,
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "config": {
            "ops": report.config.ops.iter().map(|o| o.cli_name()).collect::<Vec<_>>(),
            "timeout_constant_millis": report.config.timeout_constant_millis,
            "step_budget": report.config.step_budget,
            "step_timeout_floor": report.config.step_timeout_floor,
            "fail_fast_per_mutant": report.config.fail_fast_per_mutant,
        },
        "baseline": {
            "tests": report.baseline.outcomes.len(),
            "all_green": report.baseline.all_green,
            "total_steps": report.baseline.total_steps,
            "outcomes": baseline_outcomes,
        },
        "per_operator": per_operator,
        "totals": {
            "alive": report.totals.alive,
            "dead": report.totals.dead,
            "timeout": report.totals.timeout,
        },
        "mutation_score": report.mutation_score,
        "mutation_score_pct": score_pct(report.mutation_score),
        "mutants": mutants,
    })
}

fn mutant_json(result: &MutantResult) -> Value {
    let (clause, path) = match &result.site.target {
        SiteTarget::Predicate(_) => (Value::Null, Value::Null),
        SiteTarget::Node { clause, path } => {
            (json!(clause), json!(path.steps()))
        }
    };
    json!({
        "id": result.site.id,
        "operator": result.site.operator.cli_name(),
        "predicate": result.predicate.to_string(),
        "clause": clause,
        "path": path,
        "status": result.status,
        "first_killing_test": result.first_killing_test,
        "steps_used": result.steps_used,
        "verdicts": result
            .verdicts
            .iter()
            .map(|(test, verdict)| json!({ "test": test, "verdict": verdict }))
            .collect::<Vec<_>>(),
    })
}

pub fn render_coverage(report: &CoverageReport, format: ReportFormat) -> RenderedReport {
    let body = match format {
        ReportFormat::Table => coverage_table(report),
        ReportFormat::Json => pretty(&coverage_json(report)),
    };
    RenderedReport { format, body, schema_version: SCHEMA_VERSION.to_string() }
}

fn coverage_table(report: &CoverageReport) -> String {
    let mut body = String::new();
    let row = |name: &str, tier: &crate::coverage::TierCoverage| {
        format!("{:<10} {:>4}/{:<4} {}\n", name, tier.covered, tier.total, pct_text(tier.pct()))
    };
    body.push_str(&row("sub-goal", &report.subgoal));
    body.push_str(&row("clause", &report.clause));
    body.push_str(&row("predicate", &report.predicate));
    if !report.uncovered.is_empty() {
        body.push_str("uncovered:\n");
        for u in &report.uncovered {
            body.push_str(&format!(
                "  {} clause {} at {}\n",
                u.predicate, u.clause, u.path
            ));
        }
    }
    body
}

pub fn coverage_json(report: &CoverageReport) -> Value {
    let tier = |t: &crate::coverage::TierCoverage| {
        json!({ "covered": t.covered, "total": t.total, "pct": t.pct() })
    };
    json!({
        "subgoal": tier(&report.subgoal),
        "clause": tier(&report.clause),
        "predicate": tier(&report.predicate),
        "uncovered": report
            .uncovered
            .iter()
            .map(|u| json!({
                "predicate": u.predicate.to_string(),
                "clause": u.clause,
                "path": u.path.steps(),
            }))
            .collect::<Vec<_>>(),
    })
}

fn comparison_table(row: &ComparisonRow) -> String {
    format!(
        "loc {}  predicates {}  clauses {}\nclause {}  predicate {}  sub-goal {}  mutation {}\n",
        row.loc,
        row.predicates,
        row.clauses,
        pct_text(row.clause_coverage),
        pct_text(row.predicate_coverage),
        pct_text(row.subgoal_coverage),
        pct_text(row.mutation_coverage),
    )
}

/// The `manifest.json` contents for emitted mutants.
pub fn manifest_json(entries: &[(Mutant, PredId)]) -> String {
    let items: Vec<Value> = entries
        .iter()
        .map(|(mutant, pred)| {
            let (clause, path) = match &mutant.site.target {
                SiteTarget::Predicate(_) => (Value::Null, Value::Null),
                SiteTarget::Node { clause, path } => (json!(clause), json!(path.steps())),
            };
            json!({
                "id": mutant.site.id,
                "operator": mutant.site.operator.cli_name(),
                "predicate": pred.to_string(),
                "clause": clause,
                "path": path,
                "diff": mutant.diff,
            })
        })
        .collect();
    pretty(&Value::Array(items))
}
