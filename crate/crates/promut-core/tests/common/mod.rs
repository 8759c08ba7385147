//! Shared fixtures for the integration suites.
//!
//! Each integration test target compiles this module; not every target
//! uses every helper.
#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use promut_core::harness::{parse_suite, TestCase};
use promut_core::syntax::{parse_program, Program};

pub const CORPUS_PROGRAMS: [&str; 9] = [
    "wrapped_sort",
    "is_empty",
    "flatten",
    "remove_dups",
    "min",
    "rev",
    "add_to_list",
    "is_list",
    "filter",
];

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub struct Fixture {
    pub name: &'static str,
    pub source: String,
    pub program: Program,
    pub cases: Vec<TestCase>,
}

pub fn load_fixture(name: &'static str) -> Fixture {
    let dir = corpus_dir();
    let source = std::fs::read_to_string(dir.join(format!("{name}.pl")))
        .unwrap_or_else(|e| panic!("corpus program {name}: {e}"));
    let tests = std::fs::read_to_string(dir.join(format!("{name}_tests.pl")))
        .unwrap_or_else(|e| panic!("corpus suite {name}: {e}"));
    let program =
        parse_program(&source).unwrap_or_else(|e| panic!("corpus program {name}: {e}"));
    let cases = parse_suite(&tests).unwrap_or_else(|e| panic!("corpus suite {name}: {e}"));
    Fixture { name, source, program, cases }
}

pub fn load_corpus() -> Vec<Fixture> {
    CORPUS_PROGRAMS.iter().map(|name| load_fixture(name)).collect()
}
