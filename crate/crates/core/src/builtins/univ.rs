use crate::error::PrologError;
use crate::syntax::{write_term, OperatorTable};
use crate::terms::{atoms, Bindings, Term};

/// `[f, a1, ..., an]` for a compound, `[c]` for an atomic term.
pub fn decompose(t: &Term) -> Option<Term> {
    match t {
        Term::Var(_) => None,
        Term::Compound(c) => {
            let mut items = Vec::with_capacity(c.arity() + 1);
            items.push(Term::Atom(c.functor().clone()));
            items.extend(c.args().iter().cloned());
            Some(Term::list(items))
        }
        atomic => Some(Term::list(vec![atomic.clone()])),
    }
}

/// Reads a proper list, dereferencing each cell.
fn list_items(list: &Term, b: &Bindings) -> Result<Vec<Term>, PrologError> {
    let mut items = Vec::new();
    let mut cur = b.deref(list).clone();
    loop {
        match &cur {
            Term::Var(_) => {
                return Err(PrologError::Instantiation(
                    "=.. needs a proper list when the term is unbound".into(),
                ))
            }
            Term::Atom(a) if a == &atoms::nil() => return Ok(items),
            Term::Compound(c) if c.functor() == &atoms::dot() && c.arity() == 2 => {
                items.push(b.deref(&c.args()[0]).clone());
                let next = b.deref(&c.args()[1]).clone();
                cur = next;
            }
            other => {
                return Err(PrologError::Type {
                    expected: "list",
                    culprit: write_term(other, &OperatorTable::default(), true),
                })
            }
        }
    }
}

/// Builds the term described by a univ list.
pub fn compose_from_list(list: &Term, b: &Bindings) -> Result<Term, PrologError> {
    let mut items = list_items(list, b)?;
    if items.is_empty() {
        return Err(PrologError::Domain("non_empty_list []".into()));
    }
    let head = items.remove(0);
    match (&head, items.is_empty()) {
        (Term::Var(_), _) => Err(PrologError::Instantiation(
            "=.. list head is unbound".into(),
        )),
        (Term::Compound(_), true) => Err(PrologError::Type {
            expected: "atomic",
            culprit: write_term(&b.resolve(&head)?, &OperatorTable::default(), true),
        }),
        (_, true) => Ok(head),
        (Term::Atom(a), false) => Ok(Term::from_parts(a.clone(), items)),
        (other, false) => Err(PrologError::Type {
            expected: "atom",
            culprit: write_term(&b.resolve(other)?, &OperatorTable::default(), true),
        }),
    }
}
