//! Arithmetic evaluation for `is/2` and the comparison builtins.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::bindings::Bindings;
use super::error::EngineError;
use crate::syntax::{Term, TermKind};

/// An evaluated number. Integers stay exact at any magnitude.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Int(BigInt),
    Float(f64),
}

impl Number {
    pub fn into_term(self) -> Term {
        match self {
            Number::Int(v) => Term::int(v),
            Number::Float(v) => Term::float(v),
        }
    }

    fn as_f64(&self) -> f64 {
        match self {
            Number::Int(v) => big_to_f64(v),
            Number::Float(v) => *v,
        }
    }

    /// Numeric comparison for `=:=` and friends. `None` only when a float
    /// comparison involves NaN, in which case every comparison goal fails.
    pub fn compare(&self, other: &Number) -> Option<Ordering> {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) => Some(a.cmp(b)),
            _ => self.as_f64().partial_cmp(&other.as_f64()),
        }
    }
}

fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(if v.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Evaluates an arithmetic expression under the current bindings.
///
/// Supported: integer and float literals, `+ - *` (int stays int),
/// `/` (exact integer result when divisible, float otherwise), floored
/// `mod` on integers, and unary `-`.
pub fn arith_eval(store: &Bindings, expr: &Term) -> Result<Number, EngineError> {
    let t = store.walk(expr);
    match &t.kind {
        TermKind::Int(v) => Ok(Number::Int(v.clone())),
        TermKind::Float(v) => Ok(Number::Float(*v)),
        TermKind::Var { .. } => Err(EngineError::instantiation(t.span)),
        TermKind::Atom(name) => Err(EngineError::type_error("evaluable", format!("{name}/0"), t.span)),
        TermKind::Compound { functor, args } => {
            match (functor.as_str(), args.len()) {
                ("-", 1) => {
                    let a = arith_eval(store, &args[0])?;
                    Ok(match a {
                        Number::Int(v) => Number::Int(-v),
                        Number::Float(v) => Number::Float(-v),
                    })
                }
                ("+", 2) | ("-", 2) | ("*", 2) => {
                    let a = arith_eval(store, &args[0])?;
                    let b = arith_eval(store, &args[1])?;
                    Ok(combine(functor, a, b))
                }
                ("/", 2) => {
                    let a = arith_eval(store, &args[0])?;
                    let b = arith_eval(store, &args[1])?;
                    divide(a, b, &t)
                }
                ("mod", 2) => {
                    let a = arith_eval(store, &args[0])?;
                    let b = arith_eval(store, &args[1])?;
                    modulo(a, b, &t)
                }
                _ => Err(EngineError::type_error(
                    "evaluable",
                    format!("{functor}/{}", args.len()),
                    t.span,
                )),
            }
        }
    }
}

fn combine(op: &str, a: Number, b: Number) -> Number {
    match (a, b) {
        (Number::Int(x), Number::Int(y)) => Number::Int(match op {
            "+" => x + y,
            "-" => x - y,
            "*" => x * y,
            _ => unreachable!(),
        }),
        (x, y) => {
            let (x, y) = (x.as_f64(), y.as_f64());
            Number::Float(match op {
                "+" => x + y,
                "-" => x - y,
                "*" => x * y,
                _ => unreachable!(),
            })
        }
    }
}

fn divide(a: Number, b: Number, at: &Term) -> Result<Number, EngineError> {
    match (&a, &b) {
        (Number::Int(x), Number::Int(y)) => {
            if y.is_zero() {
                return Err(EngineError::zero_divisor(at.span));
            }
            if (x % y).is_zero() {
                Ok(Number::Int(x / y))
            } else {
                Ok(Number::Float(big_to_f64(x) / big_to_f64(y)))
            }
        }
        _ => {
            let y = b.as_f64();
            if y == 0.0 {
                return Err(EngineError::zero_divisor(at.span));
            }
            Ok(Number::Float(a.as_f64() / y))
        }
    }
}

fn modulo(a: Number, b: Number, at: &Term) -> Result<Number, EngineError> {
    let Number::Int(x) = a else {
        return Err(EngineError::type_error("integer", render_num(&a), at.span));
    };
    let Number::Int(y) = b else {
        return Err(EngineError::type_error("integer", render_num(&b), at.span));
    };
    if y.is_zero() {
        return Err(EngineError::zero_divisor(at.span));
    }
    // Floored modulus: the result takes the divisor's sign.
    Ok(Number::Int(x.mod_floor(&y)))
}

fn render_num(n: &Number) -> String {
    match n {
        Number::Int(v) => v.to_string(),
        Number::Float(v) => format!("{v:?}"),
    }
}
