//! `promut`: mutation testing and coverage for the supported Prolog
//! subset.
//!
//! Exit codes: 0 on success (and score at or above `--min-score`), 1 when
//! the baseline is rejected or the score falls below the threshold, 2 on
//! usage, parse, or I/O errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use promut_core::coverage::{compare, measure};
use promut_core::engine::trace::TraceSink;
use promut_core::engine::{solve, Budget, SolveOutcome};
use promut_core::harness::{parse_suite, TestCase};
use promut_core::mutate::{apply, enumerate_sites, Mutant, OperatorId, SiteTarget};
use promut_core::report::{
    manifest_json, render_campaign, render_coverage, ReportFormat, RenderedReport,
};
use promut_core::runner::{run_campaign, RunnerConfig, RunnerError};
use promut_core::syntax::{parse_program, parse_term_text, print_program, print_term, Program};

#[derive(Parser)]
#[command(name = "promut", version, about = "Mutation testing for a Prolog subset")]
struct Cli {
    /// Suppress report output; exit codes still reflect the result.
    #[arg(long, global = true)]
    quiet: bool,

    /// Report format for subcommands that render one.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Reserved; campaigns are deterministic and take no random decisions.
    #[arg(long, global = true, hide = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full mutation campaign against a test suite.
    Run(RunArgs),
    /// Measure sub-goal, clause and predicate coverage of a suite.
    Coverage(CoverageArgs),
    /// Write every mutant of a program to a directory.
    Mutants(MutantsArgs),
    /// List the operator catalogue with classes.
    ListOps,
    /// Prove a single goal, optionally dumping trace events as JSON lines.
    Solve(SolveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> ReportFormat {
        match f {
            Format::Table => ReportFormat::Table,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Program under test.
    program: PathBuf,
    /// Test file; repeatable.
    #[arg(long, required = true)]
    tests: Vec<PathBuf>,
    /// Operators: `all`, `sensible`, `foolish`, or a comma-separated list.
    #[arg(long, default_value = "all")]
    ops: String,
    /// Constant part of the wall-clock timeout per test.
    #[arg(long, default_value_t = 1000)]
    timeout_constant_ms: u64,
    /// Hard step budget per test.
    #[arg(long, default_value_t = 1_000_000)]
    step_budget: u64,
    /// Constant part of the baseline-derived step allowance.
    #[arg(long, default_value_t = 10_000)]
    step_timeout_floor: u64,
    /// Parallel mutant workers.
    #[arg(long, env = "PROMUT_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Run the whole suite on every mutant instead of stopping at the
    /// first kill.
    #[arg(long)]
    matrix: bool,
    /// Minimum score required for exit code 0; 0 always passes.
    #[arg(long, default_value_t = 0.0)]
    min_score: f64,
    /// Also measure coverage and append the comparison row.
    #[arg(long)]
    with_coverage: bool,
}

#[derive(Args)]
struct CoverageArgs {
    program: PathBuf,
    #[arg(long, required = true)]
    tests: Vec<PathBuf>,
    #[arg(long, default_value_t = 1_000_000)]
    step_budget: u64,
}

#[derive(Args)]
struct MutantsArgs {
    program: PathBuf,
    #[arg(long, default_value = "all")]
    ops: String,
    /// Directory for `<id>_<operator>.pl` files and `manifest.json`.
    #[arg(long)]
    emit_dir: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    program: PathBuf,
    /// Goal to prove, in source syntax.
    #[arg(long)]
    goal: String,
    /// Dump call/exit/redo/fail events as JSON lines.
    #[arg(long)]
    trace: bool,
    #[arg(long, default_value_t = 1_000_000)]
    step_budget: u64,
}

/// Errors that end the process with exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    match dispatch(cli) {
        Ok(code) => code,
        Err(UsageError(message)) => {
            if !quiet {
                eprintln!("error: {message}");
            }
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, UsageError> {
    let format = cli.format.into();
    match cli.command {
        Command::Run(args) => cmd_run(args, format, cli.quiet),
        Command::Coverage(args) => cmd_coverage(args, format, cli.quiet),
        Command::Mutants(args) => cmd_mutants(args, cli.quiet),
        Command::ListOps => {
            for op in OperatorId::ALL {
                println!(
                    "{} {}",
                    op.cli_name(),
                    match op.class() {
                        promut_core::mutate::OperatorClass::Sensible => "sensible",
                        promut_core::mutate::OperatorClass::Foolish => "foolish",
                    }
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve(args) => cmd_solve(args, cli.quiet),
    }
}

fn read_to_string(path: &Path) -> Result<String, UsageError> {
    std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))
}

fn load_program(path: &Path) -> Result<(String, Program), UsageError> {
    let source = read_to_string(path)?;
    let program = parse_program(&source)
        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    Ok((source, program))
}

fn load_cases(paths: &[PathBuf]) -> Result<Vec<TestCase>, UsageError> {
    let mut cases: Vec<TestCase> = Vec::new();
    for path in paths {
        let source = read_to_string(path)?;
        let parsed =
            parse_suite(&source).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        for case in parsed {
            if cases.iter().any(|c| c.suite == case.suite && c.name == case.name) {
                return Err(UsageError(format!(
                    "duplicate test name {} across test files",
                    case.label()
                )));
            }
            cases.push(case);
        }
    }
    Ok(cases)
}

fn parse_ops(spec: &str) -> Result<Vec<OperatorId>, UsageError> {
    match spec {
        "all" => Ok(OperatorId::ALL.to_vec()),
        "sensible" => Ok(OperatorId::sensible()),
        "foolish" => Ok(OperatorId::foolish()),
        csv => {
            let mut ops = Vec::new();
            for name in csv.split(',') {
                let name = name.trim();
                let op = OperatorId::from_cli_name(name)
                    .ok_or_else(|| UsageError(format!("unknown operator {name:?}")))?;
                if !ops.contains(&op) {
                    ops.push(op);
                }
            }
            if ops.is_empty() {
                return Err(UsageError("no operators selected".to_string()));
            }
            Ok(ops)
        }
    }
}

fn emit(rendered: &RenderedReport, quiet: bool) {
    if !quiet {
        print!("{}", rendered.body);
    }
}

fn cmd_run(args: RunArgs, format: ReportFormat, quiet: bool) -> Result<ExitCode, UsageError> {
    let (source, program) = load_program(&args.program)?;
    let cases = load_cases(&args.tests)?;
    let config = RunnerConfig {
        ops: parse_ops(&args.ops)?,
        timeout_constant_millis: args.timeout_constant_ms,
        step_budget: args.step_budget,
        step_timeout_floor: args.step_timeout_floor,
        jobs: args.jobs,
        fail_fast_per_mutant: !args.matrix,
    };

    let report = match run_campaign(&program, &cases, &config) {
        Ok(report) => report,
        Err(RunnerError::EmptySuite) => {
            return Err(UsageError(RunnerError::EmptySuite.to_string()));
        }
        Err(e @ RunnerError::BaselineRejected { .. }) => {
            if !quiet {
                eprintln!("{e}");
            }
            return Ok(ExitCode::from(1));
        }
    };

    let (coverage, comparison) = if args.with_coverage {
        let cov = measure(&program, &cases, &Budget::steps(config.step_budget));
        let row = compare(&cov, &report, &source, &program);
        (Some(cov), Some(row))
    } else {
        (None, None)
    };

    let rendered = render_campaign(&report, format, coverage.as_ref(), comparison.as_ref());
    emit(&rendered, quiet);

    let passes = if args.min_score <= 0.0 {
        true
    } else {
        report.mutation_score.is_some_and(|s| s >= args.min_score)
    };
    Ok(if passes { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_coverage(args: CoverageArgs, format: ReportFormat, quiet: bool) -> Result<ExitCode, UsageError> {
    let (_, program) = load_program(&args.program)?;
    let cases = load_cases(&args.tests)?;
    let report = measure(&program, &cases, &Budget::steps(args.step_budget));
    let rendered = render_coverage(&report, format);
    emit(&rendered, quiet);
    Ok(ExitCode::SUCCESS)
}

fn cmd_mutants(args: MutantsArgs, quiet: bool) -> Result<ExitCode, UsageError> {
    let (_, program) = load_program(&args.program)?;
    let ops = parse_ops(&args.ops)?;
    std::fs::create_dir_all(&args.emit_dir)
        .map_err(|e| UsageError(format!("cannot create {}: {e}", args.emit_dir.display())))?;

    let sites = enumerate_sites(&program, &ops);
    let mut entries: Vec<(Mutant, promut_core::syntax::PredId)> = Vec::new();
    for site in &sites {
        let mutant = apply(&program, site).expect("sites come from this program");
        let pred = match &site.target {
            SiteTarget::Predicate(pred) => pred.clone(),
            SiteTarget::Node { clause, .. } => program.clauses()[*clause].pred_id(),
        };
        let file = args.emit_dir.join(format!("{}_{}.pl", site.id, site.operator.cli_name()));
        std::fs::write(&file, print_program(&mutant.program))
            .map_err(|e| UsageError(format!("cannot write {}: {e}", file.display())))?;
        entries.push((mutant, pred));
    }
    let manifest = args.emit_dir.join("manifest.json");
    std::fs::write(&manifest, manifest_json(&entries))
        .map_err(|e| UsageError(format!("cannot write {}: {e}", manifest.display())))?;
    if !quiet {
        println!("wrote {} mutants to {}", entries.len(), args.emit_dir.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(args: SolveArgs, quiet: bool) -> Result<ExitCode, UsageError> {
    let (_, program) = load_program(&args.program)?;
    let goal = parse_term_text(&args.goal).map_err(|e| UsageError(format!("--goal: {e}")))?;
    let budget = Budget::steps(args.step_budget);

    let mut printer = |event: promut_core::engine::trace::TraceEvent| {
        println!("{}", event.to_json());
    };
    let sink: Option<&mut dyn TraceSink> = if args.trace { Some(&mut printer) } else { None };
    let result = solve(&program, &goal, &budget, sink);

    if !quiet {
        match &result.outcome {
            SolveOutcome::Success(solution) => {
                if solution.bindings.is_empty() {
                    println!("true.");
                } else {
                    let mut line = String::new();
                    for (i, (name, term)) in solution.bindings.iter().enumerate() {
                        if i > 0 {
                            line.push_str(", ");
                        }
                        write!(line, "{name} = {}", print_term(term)).expect("string write");
                    }
                    println!("{line}.");
                }
            }
            SolveOutcome::Failure => println!("false."),
            SolveOutcome::Error(e) => println!("error: {e}"),
            SolveOutcome::BudgetExhausted { steps_used } => {
                println!("timeout after {steps_used} steps.")
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
