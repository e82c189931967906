use std::cmp::Ordering;
use std::fmt;

use crate::error::PrologError;
use crate::syntax::{write_term, OperatorTable};
use crate::terms::{Bindings, Term};

/// The value of a ground arithmetic expression.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Number {
    Int(i64),
    Float(f64),
}

impl Number {
    pub fn to_term(self) -> Term {
        match self {
            Number::Int(n) => Term::Int(n),
            Number::Float(x) => Term::Float(x),
        }
    }

    fn as_f64(self) -> f64 {
        match self {
            Number::Int(n) => n as f64,
            Number::Float(x) => x,
        }
    }

    /// Numeric comparison after promotion. `None` only for NaN.
    pub fn compare(self, other: Number) -> Option<Ordering> {
        match (self, other) {
            (Number::Int(a), Number::Int(b)) => Some(a.cmp(&b)),
            (a, b) => a.as_f64().partial_cmp(&b.as_f64()),
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_term(&self.to_term(), &OperatorTable::default(), true))
    }
}

/// The comparison relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Less,
    LessEq,
    Equal,
    NotEqual,
    GreaterEq,
    Greater,
}

impl Relation {
    pub fn from_name(name: &str) -> Option<Relation> {
        Some(match name {
            "<" => Relation::Less,
            "=<" => Relation::LessEq,
            "=:=" => Relation::Equal,
            "=\\=" => Relation::NotEqual,
            ">=" => Relation::GreaterEq,
            ">" => Relation::Greater,
            _ => return None,
        })
    }

    pub fn holds(self, ord: Option<Ordering>) -> bool {
        use Ordering::*;
        match (self, ord) {
            (Relation::NotEqual, None) => true,
            (_, None) => false,
            (Relation::Less, Some(o)) => o == Less,
            (Relation::LessEq, Some(o)) => o != Greater,
            (Relation::Equal, Some(o)) => o == Equal,
            (Relation::NotEqual, Some(o)) => o != Equal,
            (Relation::GreaterEq, Some(o)) => o != Less,
            (Relation::Greater, Some(o)) => o == Greater,
        }
    }
}

fn show(t: &Term, b: &Bindings) -> String {
    let t = b.resolve(t).unwrap_or_else(|_| t.clone());
    write_term(&t, &OperatorTable::default(), true)
}

fn overflow() -> PrologError {
    PrologError::Evaluation("int_overflow".into())
}

fn checked(a: Number, b: Number, int_op: fn(i64, i64) -> Option<i64>, float_op: fn(f64, f64) -> f64) -> Result<Number, PrologError> {
    match (a, b) {
        (Number::Int(x), Number::Int(y)) => int_op(x, y).map(Number::Int).ok_or_else(overflow),
        (x, y) => Ok(Number::Float(float_op(x.as_f64(), y.as_f64()))),
    }
}

/// Evaluates an arithmetic expression over `+ - * //` and unary `-`.
pub fn eval_gae(t: &Term, b: &Bindings) -> Result<Number, PrologError> {
    match b.deref(t) {
        Term::Int(n) => Ok(Number::Int(*n)),
        Term::Float(x) => Ok(Number::Float(*x)),
        Term::Var(_) => Err(PrologError::Instantiation(
            "arithmetic expression is not ground".into(),
        )),
        Term::Atom(_) => Err(PrologError::Type {
            expected: "number",
            culprit: show(t, b),
        }),
        Term::Compound(c) => {
            let args = c.args();
            match (c.functor().as_str(), args.len()) {
                ("+", 2) => checked(
                    eval_gae(&args[0], b)?,
                    eval_gae(&args[1], b)?,
                    i64::checked_add,
                    |x, y| x + y,
                ),
                ("-", 2) => checked(
                    eval_gae(&args[0], b)?,
                    eval_gae(&args[1], b)?,
                    i64::checked_sub,
                    |x, y| x - y,
                ),
                ("*", 2) => checked(
                    eval_gae(&args[0], b)?,
                    eval_gae(&args[1], b)?,
                    i64::checked_mul,
                    |x, y| x * y,
                ),
                ("//", 2) => {
                    let x = eval_gae(&args[0], b)?;
                    let y = eval_gae(&args[1], b)?;
                    match (x, y) {
                        (Number::Int(_), Number::Int(0)) => {
                            Err(PrologError::Evaluation("zero_divisor".into()))
                        }
                        (Number::Int(p), Number::Int(q)) => {
                            p.checked_div(q).map(Number::Int).ok_or_else(overflow)
                        }
                        (Number::Float(_), _) => Err(PrologError::Type {
                            expected: "integer",
                            culprit: x.to_string(),
                        }),
                        (_, _) => Err(PrologError::Type {
                            expected: "integer",
                            culprit: y.to_string(),
                        }),
                    }
                }
                ("-", 1) => match eval_gae(&args[0], b)? {
                    Number::Int(n) => n.checked_neg().map(Number::Int).ok_or_else(overflow),
                    Number::Float(x) => Ok(Number::Float(-x)),
                },
                (name, arity) => Err(PrologError::Type {
                    expected: "evaluable",
                    culprit: format!("{}/{}", name, arity),
                }),
            }
        }
    }
}

/// Evaluates both sides and applies `rel`.
pub fn compare(rel: Relation, left: &Term, right: &Term, b: &Bindings) -> Result<bool, PrologError> {
    let l = eval_gae(left, b)?;
    let r = eval_gae(right, b)?;
    Ok(rel.holds(l.compare(r)))
}
