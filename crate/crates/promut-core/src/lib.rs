//! Mutation testing and coverage analysis for a Prolog subset.
//!
//! The crate bundles everything the `promut` tool needs: a reader and
//! printer for the supported subset, a resolution engine with tracing and
//! step budgets, a PlUnit-style test harness, the mutation operator
//! catalogue, the campaign runner, and report rendering.

pub mod coverage;
pub mod engine;
pub mod harness;
pub mod mutate;
pub mod report;
pub mod runner;
pub mod syntax;

pub use engine::{solve, Budget, SolveOutcome, SolveResult, Solution};
pub use syntax::{parse_program, parse_term_text, print_program, print_term, Program, Term};
