//! Fixture loading shared by the benchmarks.

use std::path::PathBuf;

use promut_core::harness::{parse_suite, TestCase};
use promut_core::syntax::{parse_program, Program};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn load(name: &str) -> (String, Program, Vec<TestCase>) {
    let dir = corpus_dir();
    let source = std::fs::read_to_string(dir.join(format!("{name}.pl"))).expect("program file");
    let tests =
        std::fs::read_to_string(dir.join(format!("{name}_tests.pl"))).expect("tests file");
    let program = parse_program(&source).expect("corpus parses");
    let cases = parse_suite(&tests).expect("corpus suite parses");
    (source, program, cases)
}
