//! The four-port execution trace.
//!
//! Subjects are clause-body sub-goals, addressed exactly like mutation
//! sites: predicate, clause ordinal within the predicate, and the
//! sub-goal's path inside the clause. Coverage is derived from exit ports
//! alone; redo and fail are recorded for tooling but do not affect it.

use serde::Serialize;

use crate::syntax::{PredId, TermPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Port {
    Call,
    Exit,
    Redo,
    Fail,
}

/// A traced sub-goal: where in the program the goal text lives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subject {
    pub pred: PredId,
    /// Clause ordinal within the predicate.
    pub clause: usize,
    pub path: TermPath,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub port: Port,
    pub subject: Subject,
    /// Monotone step counter at emission time.
    pub step: u64,
}

impl TraceEvent {
    /// The stable JSON-lines shape used by `--trace`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            port: Port,
            pred: &'a str,
            arity: usize,
            clause: usize,
            path: &'a [usize],
            step: u64,
        }
        serde_json::to_string(&Line {
            port: self.port,
            pred: &self.subject.pred.name,
            arity: self.subject.pred.arity,
            clause: self.subject.clause,
            path: self.subject.path.steps(),
            step: self.step,
        })
        .expect("trace lines always serialize")
    }
}

/// In-process consumer of trace events.
pub trait TraceSink {
    fn emit(&mut self, event: TraceEvent);
}

impl<F: FnMut(TraceEvent)> TraceSink for F {
    fn emit(&mut self, event: TraceEvent) {
        self(event)
    }
}

/// Collects events into a vector; the usual sink in tests and coverage.
#[derive(Debug, Default)]
pub struct CollectingSink {
    pub events: Vec<TraceEvent>,
}

impl TraceSink for CollectingSink {
    fn emit(&mut self, event: TraceEvent) {
        self.events.push(event);
    }
}
