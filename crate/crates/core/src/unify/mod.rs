//! Unification: the destructive, trail-recording unifier the engine uses, and
//! the equation-set solver it is checked against.

mod martelli_montanari;

pub use martelli_montanari::{
    mm_solve, mm_solve_with, mm_step, mm_trace, Action, Equation, EquationSet, FailureReason,
    NoApplicableAction, StepOutcome, Strategy, UnifyOutcome,
};

use crate::terms::{Bindings, Term};

/// Unifies two terms in place. On success every new binding is on the trail;
/// on failure the bindings are exactly as they were on entry.
///
/// Variable-variable pairs bind the younger (higher id) variable to the older.
pub fn unify(left: &Term, right: &Term, bindings: &mut Bindings, occur_check: bool) -> bool {
    let mark = bindings.mark();
    if unify_pairs(left, right, bindings, occur_check) {
        true
    } else {
        bindings.undo_to(mark);
        false
    }
}

fn unify_pairs(left: &Term, right: &Term, bindings: &mut Bindings, occur_check: bool) -> bool {
    let mut pending: Vec<(Term, Term)> = vec![(left.clone(), right.clone())];
    while let Some((l, r)) = pending.pop() {
        let l = bindings.deref(&l).clone();
        let r = bindings.deref(&r).clone();
        match (&l, &r) {
            (Term::Var(a), Term::Var(b)) => {
                if a == b {
                    continue;
                }
                if a.id() > b.id() {
                    bindings.bind(a, r.clone());
                } else {
                    bindings.bind(b, l.clone());
                }
            }
            (Term::Var(a), other) | (other, Term::Var(a)) => {
                if occur_check && bindings.occurs_in(a, other) {
                    return false;
                }
                bindings.bind(a, other.clone());
            }
            (Term::Atom(a), Term::Atom(b)) => {
                if a != b {
                    return false;
                }
            }
            (Term::Int(a), Term::Int(b)) => {
                if a != b {
                    return false;
                }
            }
            (Term::Float(a), Term::Float(b)) => {
                if a.to_bits() != b.to_bits() {
                    return false;
                }
            }
            (Term::Compound(a), Term::Compound(b)) => {
                if std::sync::Arc::ptr_eq(a, b) && a.is_ground() {
                    continue;
                }
                if a.functor() != b.functor() || a.arity() != b.arity() {
                    return false;
                }
                for (x, y) in a.args().iter().zip(b.args()).rev() {
                    pending.push((x.clone(), y.clone()));
                }
            }
            _ => return false,
        }
    }
    true
}
