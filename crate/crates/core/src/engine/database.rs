use std::collections::HashMap;
use std::sync::Arc;

use crate::builtins;
use crate::error::PrologError;
use crate::terms::{Atom, Bindings, Term, Var, VarId};

/// A stored clause. Variables are numbered `0..var_count` so that renaming
/// is an offset into freshly reserved slots.
#[derive(Clone, Debug)]
pub struct Clause {
    head: Term,
    body: Vec<Term>,
    body_term: Term,
    var_count: usize,
}

impl Clause {
    /// Normalizes variable numbering; the head must be callable.
    pub fn new(head: Term, body: Vec<Term>) -> Result<Clause, PrologError> {
        match &head {
            Term::Var(_) => {
                return Err(PrologError::Instantiation("clause head is a variable".into()))
            }
            Term::Int(_) | Term::Float(_) => {
                return Err(PrologError::Type {
                    expected: "callable",
                    culprit: format!("clause head {}", crate::syntax::write_term(&head, &Default::default(), true)),
                })
            }
            _ => {}
        }
        let mut numbering: HashMap<VarId, usize> = HashMap::new();
        let mut renumber = |v: &Var| {
            let next = numbering.len();
            let id = *numbering.entry(v.id()).or_insert(next);
            Term::Var(Var::new(id))
        };
        let head = head.map_vars(&mut renumber);
        let body: Vec<Term> = body.iter().map(|g| g.map_vars(&mut renumber)).collect();
        let body_term = Term::conjunction(body.clone());
        Ok(Clause {
            head,
            body,
            body_term,
            var_count: numbering.len(),
        })
    }

    pub fn head(&self) -> &Term {
        &self.head
    }

    pub fn body(&self) -> &[Term] {
        &self.body
    }

    /// The body as one term: a `','/2` chain, or `true` for a fact.
    pub fn body_term(&self) -> &Term {
        &self.body_term
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    /// Copies the clause with fresh variables allocated in `bindings`.
    pub fn rename(&self, bindings: &mut Bindings) -> RenamedClause {
        let base = bindings.reserve(self.var_count);
        let mut shift = |v: &Var| Term::Var(Var::new(base + v.id()));
        RenamedClause {
            head: self.head.map_vars(&mut shift),
            body: self.body.iter().map(|g| g.map_vars(&mut shift)).collect(),
            base,
        }
    }

    /// Only the head, renamed from an already reserved `base`.
    pub(crate) fn head_at(&self, base: VarId) -> Term {
        self.head.map_vars(&mut |v: &Var| Term::Var(Var::new(base + v.id())))
    }

    pub(crate) fn body_at(&self, base: VarId) -> impl Iterator<Item = Term> + '_ {
        self.body
            .iter()
            .map(move |g| g.map_vars(&mut |v: &Var| Term::Var(Var::new(base + v.id()))))
    }

    pub(crate) fn body_term_at(&self, base: VarId) -> Term {
        self.body_term
            .map_vars(&mut |v: &Var| Term::Var(Var::new(base + v.id())))
    }
}

/// A clause after renaming: no variable is shared with any other live term.
#[derive(Clone, Debug)]
pub struct RenamedClause {
    pub head: Term,
    pub body: Vec<Term>,
    /// First variable id of the renamed copy.
    pub base: VarId,
}

/// Renames `clause` apart from every live variable of `bindings`.
pub fn rename_clause(clause: &Clause, bindings: &mut Bindings) -> RenamedClause {
    clause.rename(bindings)
}

/// The clauses of one relation, in source order.
#[derive(Clone, Debug, Default)]
pub struct Predicate {
    clauses: Vec<Clause>,
}

impl Predicate {
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }
}

pub type PredicateKey = (Atom, usize);

/// User definitions keyed by name and arity.
#[derive(Clone, Debug, Default)]
pub struct Database {
    predicates: HashMap<PredicateKey, Arc<Predicate>>,
    order: Vec<PredicateKey>,
}

impl Database {
    pub fn new() -> Database {
        Database::default()
    }

    /// Appends a clause to its definition. Built-in relations cannot be extended.
    pub fn add_clause(&mut self, clause: Clause) -> Result<(), PrologError> {
        let (name, arity) = clause.head.indicator().expect("clause head is callable");
        if builtins::is_builtin(name.as_str(), arity) {
            return Err(PrologError::Permission(format!(
                "modify static procedure {}/{}",
                name, arity
            )));
        }
        let key = (name, arity);
        let pred = self.predicates.entry(key.clone()).or_insert_with(|| {
            self.order.push(key);
            Arc::new(Predicate::default())
        });
        Arc::make_mut(pred).clauses.push(clause);
        Ok(())
    }

    pub fn get(&self, name: &Atom, arity: usize) -> Option<&Arc<Predicate>> {
        self.predicates.get(&(name.clone(), arity))
    }

    pub fn clauses(&self, name: &str, arity: usize) -> &[Clause] {
        self.get(&Atom::new(name), arity)
            .map(|p| p.clauses())
            .unwrap_or(&[])
    }

    /// Defined relations in order of first definition.
    pub fn relations(&self) -> &[PredicateKey] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.predicates.values().map(|p| p.clauses.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty()
    }
}
