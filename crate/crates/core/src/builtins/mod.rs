//! Built-in relations. Control constructs that reshape the goal list
//! (conjunction, disjunction, if-then-else, cut, not, call, clause) are run
//! by the engine itself; the rest are plain functions over bindings.

pub mod arith;
pub mod univ;

use crate::error::PrologError;
use crate::syntax::{OpType, OperatorTable};
use crate::terms::{atoms, Atom, Bindings, Term};
use crate::unify::unify;

pub use arith::{compare, eval_gae, Number, Relation};
pub use univ::{compose_from_list, decompose};

/// Whether the relation may produce more than one solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Determinism {
    Det,
    NonDet,
}

/// One registry entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuiltinEntry {
    pub name: &'static str,
    pub arity: usize,
    pub determinism: Determinism,
}

const fn entry(name: &'static str, arity: usize, determinism: Determinism) -> BuiltinEntry {
    BuiltinEntry {
        name,
        arity,
        determinism,
    }
}

pub const REGISTRY: &[BuiltinEntry] = &[
    entry("=", 2, Determinism::Det),
    entry("true", 0, Determinism::Det),
    entry("fail", 0, Determinism::Det),
    entry("!", 0, Determinism::Det),
    entry(",", 2, Determinism::NonDet),
    entry(";", 2, Determinism::NonDet),
    entry("->", 2, Determinism::NonDet),
    entry("not", 1, Determinism::Det),
    entry("call", 1, Determinism::NonDet),
    entry("is", 2, Determinism::Det),
    entry("<", 2, Determinism::Det),
    entry("=<", 2, Determinism::Det),
    entry("=:=", 2, Determinism::Det),
    entry("=\\=", 2, Determinism::Det),
    entry(">=", 2, Determinism::Det),
    entry(">", 2, Determinism::Det),
    entry("=..", 2, Determinism::Det),
    entry("clause", 2, Determinism::NonDet),
    entry("op", 3, Determinism::Det),
];

pub fn lookup(name: &str, arity: usize) -> Option<&'static BuiltinEntry> {
    REGISTRY.iter().find(|e| e.name == name && e.arity == arity)
}

pub fn is_builtin(name: &str, arity: usize) -> bool {
    lookup(name, arity).is_some()
}

/// What a deterministic built-in may touch.
pub struct Context<'a> {
    pub bindings: &'a mut Bindings,
    pub ops: &'a mut OperatorTable,
    pub occur_check: bool,
}

/// `=`/2
pub fn builtin_unify(ctx: &mut Context<'_>, a: &Term, b: &Term) -> bool {
    unify(a, b, ctx.bindings, ctx.occur_check)
}

/// `is`/2
pub fn builtin_is(ctx: &mut Context<'_>, result: &Term, expr: &Term) -> Result<bool, PrologError> {
    let value = eval_gae(expr, ctx.bindings)?.to_term();
    Ok(unify(result, &value, ctx.bindings, ctx.occur_check))
}

/// `=..`/2
pub fn builtin_univ(ctx: &mut Context<'_>, t: &Term, l: &Term) -> Result<bool, PrologError> {
    let t = ctx.bindings.deref(t).clone();
    match decompose(&t) {
        Some(list) => Ok(unify(&list, l, ctx.bindings, ctx.occur_check)),
        None => {
            let built = compose_from_list(l, ctx.bindings)?;
            Ok(unify(&t, &built, ctx.bindings, ctx.occur_check))
        }
    }
}

/// `op/3`: declares one operator name or a list of names.
pub fn builtin_op(ctx: &mut Context<'_>, p: &Term, kind: &Term, names: &Term) -> Result<bool, PrologError> {
    let b = &*ctx.bindings;
    let priority = match b.deref(p) {
        Term::Var(_) => return Err(PrologError::Instantiation("op/3 priority".into())),
        Term::Int(n) => *n,
        other => {
            return Err(PrologError::Type {
                expected: "integer",
                culprit: crate::syntax::write_term(other, ctx.ops, true),
            })
        }
    };
    let kind: OpType = match b.deref(kind) {
        Term::Var(_) => return Err(PrologError::Instantiation("op/3 type".into())),
        Term::Atom(a) => a.as_str().parse()?,
        other => {
            return Err(PrologError::Type {
                expected: "atom",
                culprit: crate::syntax::write_term(other, ctx.ops, true),
            })
        }
    };
    let priority = u16::try_from(priority)
        .ok()
        .filter(|p| (1..=crate::syntax::MAX_PRIORITY).contains(p))
        .ok_or_else(|| PrologError::Domain(format!("operator_priority {}", priority)))?;
    let mut list: Vec<Atom> = Vec::new();
    match b.deref(names) {
        Term::Atom(a) if a != &atoms::nil() => list.push(a.clone()),
        other => {
            let mut cur = other.clone();
            loop {
                match &cur {
                    Term::Atom(a) if a == &atoms::nil() => break,
                    Term::Compound(c) if c.functor() == &atoms::dot() && c.arity() == 2 => {
                        match b.deref(&c.args()[0]) {
                            Term::Atom(a) => list.push(a.clone()),
                            Term::Var(_) => {
                                return Err(PrologError::Instantiation("op/3 name".into()))
                            }
                            other => {
                                return Err(PrologError::Type {
                                    expected: "atom",
                                    culprit: crate::syntax::write_term(other, ctx.ops, true),
                                })
                            }
                        }
                        let next = b.deref(&c.args()[1]).clone();
                        cur = next;
                    }
                    Term::Var(_) => return Err(PrologError::Instantiation("op/3 name".into())),
                    other => {
                        return Err(PrologError::Type {
                            expected: "list",
                            culprit: crate::syntax::write_term(other, ctx.ops, true),
                        })
                    }
                }
            }
        }
    }
    for name in &list {
        if name.as_str() == "," {
            return Err(PrologError::Permission("modify operator ','".into()));
        }
    }
    for name in list {
        ctx.ops.declare(priority, kind, name.as_str())?;
    }
    Ok(true)
}

/// Runs a deterministic built-in. `None` when `name/arity` is not one of them.
pub fn call_det(ctx: &mut Context<'_>, name: &str, args: &[Term]) -> Option<Result<bool, PrologError>> {
    Some(match (name, args.len()) {
        ("=", 2) => Ok(builtin_unify(ctx, &args[0], &args[1])),
        ("is", 2) => builtin_is(ctx, &args[0], &args[1]),
        ("=..", 2) => builtin_univ(ctx, &args[0], &args[1]),
        ("op", 3) => builtin_op(ctx, &args[0], &args[1], &args[2]),
        (rel, 2) => compare(Relation::from_name(rel)?, &args[0], &args[1], ctx.bindings),
        _ => return None,
    })
}
