//! Typed runtime errors. An error aborts the whole query; there is no
//! in-language catch in the subset.

use thiserror::Error;

use crate::syntax::{PredId, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorKind {
    /// Calling a predicate with no clauses and no builtin meaning.
    ExistenceError { pred: PredId },
    /// A term of the wrong sort where `expected` was required.
    TypeError { expected: String, culprit: String },
    /// Division or modulus by zero.
    EvaluationError { what: String },
    /// An unbound variable where a bound term was required.
    InstantiationError,
}

/// A runtime error together with the span of the culprit goal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte offset {}..{}", span.start, span.end)]
pub struct EngineError {
    pub kind: ErrorKind,
    pub span: Span,
}

impl EngineError {
    pub fn existence(pred: PredId, span: Span) -> Self {
        EngineError { kind: ErrorKind::ExistenceError { pred }, span }
    }

    pub fn type_error(expected: &str, culprit: impl Into<String>, span: Span) -> Self {
        EngineError {
            kind: ErrorKind::TypeError { expected: expected.to_string(), culprit: culprit.into() },
            span,
        }
    }

    pub fn zero_divisor(span: Span) -> Self {
        EngineError {
            kind: ErrorKind::EvaluationError { what: "zero_divisor".to_string() },
            span,
        }
    }

    pub fn instantiation(span: Span) -> Self {
        EngineError { kind: ErrorKind::InstantiationError, span }
    }
}

impl std::fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ErrorKind::ExistenceError { pred } => write!(f, "existence_error(procedure, {pred})"),
            ErrorKind::TypeError { expected, culprit } => {
                write!(f, "type_error({expected}, {culprit})")
            }
            ErrorKind::EvaluationError { what } => write!(f, "evaluation_error({what})"),
            ErrorKind::InstantiationError => write!(f, "instantiation_error"),
        }
    }
}
