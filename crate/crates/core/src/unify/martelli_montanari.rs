//! The equation-set unification algorithm: pick an equation that admits one
//! of six rewrite actions, perform it, and repeat until none applies or the
//! set is found unsolvable.

use std::fmt;

use crate::syntax::{write_term, OperatorTable};
use crate::terms::{Substitution, Term, Var};

#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Equation {
        Equation { lhs, rhs }
    }
}

/// A multiset of equations. Order is kept so that selection strategies and
/// traces are reproducible.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EquationSet {
    equations: Vec<Equation>,
    // Cyclic `x = t` equations accepted with the occur-check off. They take
    // no further part in selection or substitution.
    frozen: Vec<bool>,
}

impl EquationSet {
    pub fn new(equations: Vec<Equation>) -> EquationSet {
        let frozen = vec![false; equations.len()];
        EquationSet { equations, frozen }
    }

    pub fn single(lhs: Term, rhs: Term) -> EquationSet {
        EquationSet::new(vec![Equation::new(lhs, rhs)])
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Reads the set as a substitution, turning each `x = t` into `x/t`.
    /// Only meaningful once no action applies.
    pub fn to_substitution(&self) -> Substitution {
        self.equations
            .iter()
            .filter_map(|eq| match &eq.lhs {
                Term::Var(x) => Some((x.clone(), eq.rhs.clone())),
                _ => None,
            })
            .collect()
    }

    fn occurs_elsewhere(&self, var: &Var, index: usize) -> bool {
        self.equations.iter().enumerate().any(|(j, eq)| {
            j != index && !self.frozen[j] && (eq.lhs.contains_var(var) || eq.rhs.contains_var(var))
        })
    }

    fn substitute_others(&mut self, index: usize, subst: &Substitution) {
        for (j, eq) in self.equations.iter_mut().enumerate() {
            if j != index && !self.frozen[j] {
                eq.lhs = subst.apply(&eq.lhs);
                eq.rhs = subst.apply(&eq.rhs);
            }
        }
    }
}

impl fmt::Display for EquationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ops = OperatorTable::default();
        f.write_str("{")?;
        for (i, eq) in self.equations.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(
                f,
                "{} = {}",
                write_term(&eq.lhs, &ops, true),
                write_term(&eq.rhs, &ops, true)
            )?;
        }
        f.write_str("}")
    }
}

/// The six rewrite actions, numbered as in the classic presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// `f(s1..sn) = f(t1..tn)`: replace by `s1 = t1, ..., sn = tn`.
    Decompose,
    /// `f(..) = g(..)` with different symbols: fail.
    Clash,
    /// `x = x`: delete.
    Delete,
    /// `t = x` with `t` not a variable: swap sides.
    Orient,
    /// `x = t`, `x` not in `t` but elsewhere: apply `{x/t}` to the others.
    Eliminate,
    /// `x = t`, `x` in `t` and `x` differs from `t`: fail.
    OccursCheck,
}

impl Action {
    pub fn number(self) -> u8 {
        match self {
            Action::Decompose => 1,
            Action::Clash => 2,
            Action::Delete => 3,
            Action::Orient => 4,
            Action::Eliminate => 5,
            Action::OccursCheck => 6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    FunctorClash,
    ConstantClash,
    OccurCheck,
}

#[derive(Clone, Debug, PartialEq)]
pub enum UnifyOutcome {
    Success(Substitution),
    Failure(FailureReason),
}

impl UnifyOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, UnifyOutcome::Success(_))
    }

    pub fn mgu(&self) -> Option<&Substitution> {
        match self {
            UnifyOutcome::Success(s) => Some(s),
            UnifyOutcome::Failure(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepOutcome {
    Rewritten(EquationSet),
    Failed(FailureReason),
}

/// Which applicable equation is picked when several qualify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    FirstEquation,
    LastEquation,
}

/// Returned by [`mm_step`] when the set is already in solved form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("no action applies: the equation set is in solved form")]
pub struct NoApplicableAction;

fn same_symbol(lhs: &Term, rhs: &Term) -> Option<bool> {
    match (lhs, rhs) {
        (Term::Var(_), _) | (_, Term::Var(_)) => None,
        (Term::Compound(a), Term::Compound(b)) => {
            Some(a.functor() == b.functor() && a.arity() == b.arity())
        }
        (Term::Atom(a), Term::Atom(b)) => Some(a == b),
        (Term::Int(a), Term::Int(b)) => Some(a == b),
        (Term::Float(a), Term::Float(b)) => Some(a.to_bits() == b.to_bits()),
        _ => Some(false),
    }
}

fn applicable(set: &EquationSet, index: usize, occur_check: bool) -> Option<Action> {
    if set.frozen[index] {
        return None;
    }
    let eq = &set.equations[index];
    match (&eq.lhs, &eq.rhs) {
        (Term::Var(x), Term::Var(y)) if x == y => Some(Action::Delete),
        (Term::Var(x), t) => {
            if t.contains_var(x) {
                if occur_check {
                    Some(Action::OccursCheck)
                } else {
                    Some(Action::Eliminate)
                }
            } else if set.occurs_elsewhere(x, index) {
                Some(Action::Eliminate)
            } else {
                None
            }
        }
        (_, Term::Var(_)) => Some(Action::Orient),
        (l, r) => match same_symbol(l, r) {
            Some(true) => Some(Action::Decompose),
            _ => Some(Action::Clash),
        },
    }
}

fn select(set: &EquationSet, occur_check: bool, strategy: Strategy) -> Option<(usize, Action)> {
    let pick = |i: usize| applicable(set, i, occur_check).map(|a| (i, a));
    match strategy {
        Strategy::FirstEquation => (0..set.len()).find_map(pick),
        Strategy::LastEquation => (0..set.len()).rev().find_map(pick),
    }
}

fn perform(set: &mut EquationSet, index: usize, action: Action) -> Option<FailureReason> {
    match action {
        Action::Decompose => {
            let eq = set.equations.remove(index);
            set.frozen.remove(index);
            let pairs: Vec<Equation> = eq
                .lhs
                .args()
                .iter()
                .zip(eq.rhs.args())
                .map(|(s, t)| Equation::new(s.clone(), t.clone()))
                .collect();
            let n = pairs.len();
            set.equations.splice(index..index, pairs);
            set.frozen.splice(index..index, std::iter::repeat_n(false, n));
            None
        }
        Action::Clash => {
            let eq = &set.equations[index];
            if matches!(eq.lhs, Term::Compound(_)) || matches!(eq.rhs, Term::Compound(_)) {
                Some(FailureReason::FunctorClash)
            } else {
                Some(FailureReason::ConstantClash)
            }
        }
        Action::Delete => {
            set.equations.remove(index);
            set.frozen.remove(index);
            None
        }
        Action::Orient => {
            let eq = &mut set.equations[index];
            std::mem::swap(&mut eq.lhs, &mut eq.rhs);
            None
        }
        Action::Eliminate => {
            let eq = set.equations[index].clone();
            let Term::Var(x) = &eq.lhs else {
                unreachable!("elimination selected for a non-variable left side")
            };
            let cyclic = eq.rhs.contains_var(x);
            let subst: Substitution = [(x.clone(), eq.rhs.clone())].into_iter().collect();
            set.substitute_others(index, &subst);
            if cyclic {
                set.frozen[index] = true;
            }
            None
        }
        Action::OccursCheck => Some(FailureReason::OccurCheck),
    }
}

/// Performs one action on the first equation that admits one, with the
/// occur-check on.
pub fn mm_step(eqs: &EquationSet) -> Result<(Action, StepOutcome), NoApplicableAction> {
    let (index, action) = select(eqs, true, Strategy::FirstEquation).ok_or(NoApplicableAction)?;
    let mut next = eqs.clone();
    match perform(&mut next, index, action) {
        Some(reason) => Ok((action, StepOutcome::Failed(reason))),
        None => Ok((action, StepOutcome::Rewritten(next))),
    }
}

/// Runs the algorithm to completion. With `occur_check` off, a cyclic
/// `x = t` is eliminated once and then set aside, which keeps the solver
/// total; no mgu property is claimed for that case.
pub fn mm_solve(eqs: &EquationSet, occur_check: bool) -> UnifyOutcome {
    mm_solve_with(eqs, occur_check, Strategy::FirstEquation, None)
}

pub fn mm_solve_with(
    eqs: &EquationSet,
    occur_check: bool,
    strategy: Strategy,
    mut trace: Option<&mut Vec<String>>,
) -> UnifyOutcome {
    let mut set = eqs.clone();
    while let Some((index, action)) = select(&set, occur_check, strategy) {
        let failure = perform(&mut set, index, action);
        if let Some(lines) = trace.as_deref_mut() {
            match failure {
                Some(_) => lines.push(format!("action ({}): failure", action.number())),
                None => lines.push(format!("action ({}): {}", action.number(), set)),
            }
        }
        if let Some(reason) = failure {
            return UnifyOutcome::Failure(reason);
        }
    }
    UnifyOutcome::Success(set.to_substitution())
}

/// The text trace of a run, one `action (k): {...}` line per step.
pub fn mm_trace(eqs: &EquationSet, occur_check: bool) -> (UnifyOutcome, Vec<String>) {
    let mut lines = Vec::new();
    let outcome = mm_solve_with(eqs, occur_check, Strategy::FirstEquation, Some(&mut lines));
    (outcome, lines)
}
