//! The term algebra: atoms, variables, numbers and compound terms, plus
//! substitutions as values and the mutable binding store the engine runs on.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::PrologError;

/// An interned symbol name.
///
/// Two atoms with the same text always share one allocation, so equality and
/// hashing work on the pointer.
#[derive(Clone)]
pub struct Atom(Arc<str>);

fn interner() -> &'static Mutex<HashSet<Arc<str>>> {
    static TABLE: OnceLock<Mutex<HashSet<Arc<str>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashSet::new()))
}

impl Atom {
    pub fn new(name: &str) -> Atom {
        let mut table = interner().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(existing) = table.get(name) {
            return Atom(existing.clone());
        }
        let fresh: Arc<str> = Arc::from(name);
        table.insert(fresh.clone());
        Atom(fresh)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Atom {}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as *const u8 as usize).hash(state)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! well_known_atoms {
    ($($fn_name:ident => $text:expr),* $(,)?) => {
        /// Atoms the engine and parser refer to by name.
        pub mod atoms {
            use super::Atom;
            use std::sync::OnceLock;
            $(
                pub fn $fn_name() -> Atom {
                    static CELL: OnceLock<Atom> = OnceLock::new();
                    CELL.get_or_init(|| Atom::new($text)).clone()
                }
            )*
        }
    };
}

well_known_atoms! {
    nil => "[]",
    dot => ".",
    comma => ",",
    true_ => "true",
    fail => "fail",
    cut => "!",
    semicolon => ";",
    arrow => "->",
    neck => ":-",
    not => "not",
    call => "call",
    minus => "-",
    curly => "{}",
}

pub type VarId = usize;

/// A logic variable. Identity is the numeric id; the name is only kept for
/// printing answers.
#[derive(Clone)]
pub struct Var {
    id: VarId,
    name: Option<Arc<str>>,
}

impl Var {
    pub fn new(id: VarId) -> Var {
        Var { id, name: None }
    }

    pub fn named(id: VarId, name: &str) -> Var {
        Var {
            id,
            name: Some(Arc::from(name)),
        }
    }

    pub fn id(&self) -> VarId {
        self.id
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub(crate) fn with_name(id: VarId, name: Option<Arc<str>>) -> Var {
        Var { id, name }
    }

    pub(crate) fn name_arc(&self) -> Option<Arc<str>> {
        self.name.clone()
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state)
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.id.cmp(&other.id)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(name) => write!(f, "{}#{}", name, self.id),
            None => write!(f, "_G{}", self.id),
        }
    }
}

/// A function symbol applied to one or more arguments.
#[derive(Debug)]
pub struct Compound {
    functor: Atom,
    args: Box<[Term]>,
    ground: bool,
}

impl Compound {
    pub fn functor(&self) -> &Atom {
        &self.functor
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// True when no variable occurs anywhere below this node.
    pub fn is_ground(&self) -> bool {
        self.ground
    }
}

/// The single data type of the language.
#[derive(Clone, Debug)]
pub enum Term {
    Var(Var),
    Int(i64),
    Float(f64),
    Atom(Atom),
    Compound(Arc<Compound>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a == b,
            (Term::Int(a), Term::Int(b)) => a == b,
            (Term::Float(a), Term::Float(b)) => a.to_bits() == b.to_bits(),
            (Term::Atom(a), Term::Atom(b)) => a == b,
            (Term::Compound(a), Term::Compound(b)) => {
                Arc::ptr_eq(a, b) || (a.functor == b.functor && a.args == b.args)
            }
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Atom::new(name))
    }

    pub fn var(var: Var) -> Term {
        Term::Var(var)
    }

    /// Builds `functor(args...)`. With no arguments the result is the
    /// constant `functor`.
    pub fn compound(functor: &str, args: Vec<Term>) -> Term {
        Term::from_parts(Atom::new(functor), args)
    }

    pub fn from_parts(functor: Atom, args: Vec<Term>) -> Term {
        if args.is_empty() {
            return Term::Atom(functor);
        }
        let ground = args.iter().all(Term::is_ground);
        Term::Compound(Arc::new(Compound {
            functor,
            args: args.into_boxed_slice(),
            ground,
        }))
    }

    pub fn nil() -> Term {
        Term::Atom(atoms::nil())
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::from_parts(atoms::dot(), vec![head, tail])
    }

    /// `[items... | tail]`
    pub fn list_with_tail(items: Vec<Term>, tail: Term) -> Term {
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, item| Term::cons(item, acc))
    }

    pub fn list(items: Vec<Term>) -> Term {
        Term::list_with_tail(items, Term::nil())
    }

    /// Right-nested `','/2` chain; the empty sequence is `true`.
    pub fn conjunction(goals: Vec<Term>) -> Term {
        let mut iter = goals.into_iter().rev();
        match iter.next() {
            None => Term::Atom(atoms::true_()),
            Some(last) => iter.fold(last, |acc, goal| {
                Term::from_parts(atoms::comma(), vec![goal, acc])
            }),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_number(&self) -> bool {
        matches!(self, Term::Int(_) | Term::Float(_))
    }

    pub fn is_callable(&self) -> bool {
        matches!(self, Term::Atom(_) | Term::Compound(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Compound(c) => c.ground,
            _ => true,
        }
    }

    /// Name and arity of an atom or compound.
    pub fn indicator(&self) -> Option<(Atom, usize)> {
        match self {
            Term::Atom(a) => Some((a.clone(), 0)),
            Term::Compound(c) => Some((c.functor.clone(), c.arity())),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound(c) => c.args(),
            _ => &[],
        }
    }

    pub fn is_functor(&self, name: &Atom, arity: usize) -> bool {
        match self {
            Term::Compound(c) => &c.functor == name && c.arity() == arity,
            Term::Atom(a) => arity == 0 && a == name,
            _ => false,
        }
    }

    /// Every variable occurring in the term, in left-to-right first-occurrence order.
    pub fn variables(&self) -> Vec<Var> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.collect_vars(&mut seen, &mut out);
        out
    }

    fn collect_vars(&self, seen: &mut HashSet<VarId>, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if seen.insert(v.id) {
                    out.push(v.clone());
                }
            }
            Term::Compound(c) if !c.ground => {
                for arg in c.args.iter() {
                    arg.collect_vars(seen, out);
                }
            }
            _ => {}
        }
    }

    pub fn contains_var(&self, var: &Var) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Compound(c) => !c.ground && c.args.iter().any(|a| a.contains_var(var)),
            _ => false,
        }
    }

    /// Rebuilds the term with every variable replaced through `f`. Subterms
    /// without variables are shared, not copied.
    pub fn map_vars(&self, f: &mut impl FnMut(&Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::Compound(c) if !c.ground => {
                let args = c.args.iter().map(|a| a.map_vars(f)).collect();
                Term::from_parts(c.functor.clone(), args)
            }
            _ => self.clone(),
        }
    }
}

/// A finite map from variables to terms in which no variable maps to itself.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    /// Adds `var/term`. An identity pair `x/x` is dropped.
    pub fn insert(&mut self, var: Var, term: Term) {
        if let Term::Var(v) = &term {
            if *v == var {
                self.map.remove(&var);
                return;
            }
        }
        self.map.insert(var, term);
    }

    pub fn get(&self, var: &Var) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.map.keys()
    }

    /// Simultaneous replacement: images are not substituted again.
    pub fn apply(&self, term: &Term) -> Term {
        if self.map.is_empty() {
            return term.clone();
        }
        term.map_vars(&mut |v| match self.map.get(v) {
            Some(image) => image.clone(),
            None => Term::Var(v.clone()),
        })
    }

    /// `self` followed by `delta`: delta is applied to the range of self, then
    /// delta's bindings for variables outside self's domain are added.
    pub fn compose(&self, delta: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (var, term) in &self.map {
            out.insert(var.clone(), delta.apply(term));
        }
        for (var, term) in &delta.map {
            if !self.map.contains_key(var) {
                out.insert(var.clone(), term.clone());
            }
        }
        out
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        let mut out = Substitution::new();
        for (var, term) in iter {
            out.insert(var, term);
        }
        out
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.map.iter()).finish()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ops = crate::syntax::OperatorTable::default();
        f.write_str("{")?;
        for (i, (var, term)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let mut writer = crate::syntax::TermWriter::new(&ops, true);
            write!(f, "{}/{}", writer.write(&Term::Var(var.clone())), writer.write(term))?;
        }
        f.write_str("}")
    }
}

pub fn apply_substitution(term: &Term, subst: &Substitution) -> Term {
    subst.apply(term)
}

pub fn compose(gamma: &Substitution, delta: &Substitution) -> Substitution {
    gamma.compose(delta)
}

/// A position in the binding trail. Undoing to a mark also releases every
/// variable allocated after it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mark {
    trail: usize,
    vars: usize,
}

/// The engine's mutable state: one slot per allocated variable plus an undo
/// log of the slots bound so far.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    slots: Vec<Option<Term>>,
    trail: Vec<VarId>,
}

impl Bindings {
    pub fn new() -> Bindings {
        Bindings::default()
    }

    pub fn fresh_var(&mut self) -> Var {
        let id = self.slots.len();
        self.slots.push(None);
        Var::new(id)
    }

    /// Reserves `n` consecutive variable ids and returns the first.
    pub fn reserve(&mut self, n: usize) -> VarId {
        let base = self.slots.len();
        self.slots.resize(base + n, None);
        base
    }

    pub fn var_count(&self) -> usize {
        self.slots.len()
    }

    pub fn lookup(&self, id: VarId) -> Option<&Term> {
        self.slots.get(id).and_then(Option::as_ref)
    }

    pub fn is_bound(&self, id: VarId) -> bool {
        self.lookup(id).is_some()
    }

    /// Binds an unbound variable and records it on the trail.
    pub fn bind(&mut self, var: &Var, term: Term) {
        let id = var.id();
        if id >= self.slots.len() {
            self.slots.resize(id + 1, None);
        }
        debug_assert!(self.slots[id].is_none(), "rebinding {:?}", var);
        self.slots[id] = Some(term);
        self.trail.push(id);
    }

    pub fn mark(&self) -> Mark {
        Mark {
            trail: self.trail.len(),
            vars: self.slots.len(),
        }
    }

    pub fn undo_to(&mut self, mark: Mark) {
        while self.trail.len() > mark.trail {
            let id = self.trail.pop().expect("trail underflow");
            if let Some(slot) = self.slots.get_mut(id) {
                *slot = None;
            }
        }
        if self.slots.len() > mark.vars {
            self.slots.truncate(mark.vars);
        }
    }

    /// Ids of all currently bound variables, ascending.
    pub fn bound_set(&self) -> Vec<VarId> {
        let mut ids: Vec<VarId> = self
            .slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.as_ref().map(|_| i))
            .collect();
        ids.sort_unstable();
        ids
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    /// Follows variable-to-variable and variable-to-term links until an
    /// unbound variable or a non-variable term is reached.
    pub fn deref<'a>(&'a self, mut term: &'a Term) -> &'a Term {
        while let Term::Var(v) = term {
            match self.lookup(v.id) {
                Some(next) => term = next,
                None => break,
            }
        }
        term
    }

    /// The value of `term` in the current state: every bound variable is
    /// replaced by its binding, recursively.
    pub fn resolve(&self, term: &Term) -> Result<Term, PrologError> {
        let mut active = HashSet::new();
        self.resolve_inner(term, &mut active)
    }

    fn resolve_inner(&self, term: &Term, active: &mut HashSet<VarId>) -> Result<Term, PrologError> {
        match term {
            Term::Var(v) => match self.lookup(v.id) {
                None => Ok(term.clone()),
                Some(bound) => {
                    if !active.insert(v.id) {
                        return Err(PrologError::CyclicTerm(format!("{:?}", v)));
                    }
                    let out = self.resolve_inner(bound, active);
                    active.remove(&v.id);
                    out
                }
            },
            Term::Compound(c) if !c.ground => {
                let mut changed = false;
                let mut args = Vec::with_capacity(c.arity());
                for arg in c.args.iter() {
                    let r = self.resolve_inner(arg, active)?;
                    if !changed && !same_node(&r, arg) {
                        changed = true;
                    }
                    args.push(r);
                }
                if changed {
                    Ok(Term::from_parts(c.functor.clone(), args))
                } else {
                    Ok(term.clone())
                }
            }
            _ => Ok(term.clone()),
        }
    }

    /// Whether `var` occurs in the resolved value of `term`.
    pub fn occurs_in(&self, var: &Var, term: &Term) -> bool {
        let mut visited = HashSet::new();
        self.occurs_inner(var, term, &mut visited)
    }

    fn occurs_inner(&self, var: &Var, term: &Term, visited: &mut HashSet<VarId>) -> bool {
        match term {
            Term::Var(v) => {
                if v == var {
                    return true;
                }
                match self.lookup(v.id) {
                    Some(bound) => visited.insert(v.id) && self.occurs_inner(var, bound, visited),
                    None => false,
                }
            }
            Term::Compound(c) if !c.ground => {
                c.args.iter().any(|a| self.occurs_inner(var, a, visited))
            }
            _ => false,
        }
    }
}

fn same_node(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Compound(x), Term::Compound(y)) => Arc::ptr_eq(x, y),
        (Term::Var(x), Term::Var(y)) => x == y,
        (Term::Atom(x), Term::Atom(y)) => x == y,
        (Term::Int(x), Term::Int(y)) => x == y,
        (Term::Float(x), Term::Float(y)) => x.to_bits() == y.to_bits(),
        _ => false,
    }
}

pub fn resolve(term: &Term, bindings: &Bindings) -> Result<Term, PrologError> {
    bindings.resolve(term)
}

pub fn occurs_in(var: &Var, term: &Term, bindings: &Bindings) -> bool {
    bindings.occurs_in(var, term)
}
