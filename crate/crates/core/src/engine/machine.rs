use std::path::Path;
use std::rc::Rc;
use std::sync::Arc;

use crate::builtins::{self, Context};
use crate::error::PrologError;
use crate::syntax::{parse_query, write_term, ClauseReader, OperatorTable, ParsedClause, TermWriter};
use crate::terms::{atoms, Bindings, Mark, Term, Var, VarId};
use crate::unify::unify;

use super::database::{Clause, Database, Predicate, RenamedClause};

/// One head unification, reported to an installed observer.
#[derive(Clone, Debug)]
pub struct HeadUnification {
    /// The call, fully resolved before unification.
    pub goal: Term,
    /// The renamed clause head.
    pub head: Term,
    pub occur_check: bool,
    pub unified: bool,
}

pub type UnifyObserver = Box<dyn FnMut(&HeadUnification)>;

/// Outcome of consulting program text.
#[derive(Debug, Default)]
pub struct ConsultReport {
    pub clauses: usize,
    pub directives: usize,
    /// Syntax errors and rejected clauses; the offending clause is skipped.
    pub errors: Vec<PrologError>,
    pub warnings: Vec<String>,
}

/// Database, operator table and binding store, plus engine flags.
pub struct Machine {
    db: Database,
    ops: OperatorTable,
    bindings: Bindings,
    occur_check: bool,
    step_limit: Option<u64>,
    observer: Option<UnifyObserver>,
}

impl Default for Machine {
    fn default() -> Self {
        Machine::new()
    }
}

impl Machine {
    pub fn new() -> Machine {
        Machine {
            db: Database::new(),
            ops: OperatorTable::default(),
            bindings: Bindings::new(),
            occur_check: false,
            step_limit: None,
            observer: None,
        }
    }

    pub fn occur_check(&self) -> bool {
        self.occur_check
    }

    pub fn set_occur_check(&mut self, on: bool) {
        self.occur_check = on;
    }

    /// Limits the number of goals a single query may execute.
    pub fn set_step_limit(&mut self, limit: Option<u64>) {
        self.step_limit = limit;
    }

    pub fn step_limit(&self) -> Option<u64> {
        self.step_limit
    }

    pub fn ops(&self) -> &OperatorTable {
        &self.ops
    }

    pub fn ops_mut(&mut self) -> &mut OperatorTable {
        &mut self.ops
    }

    pub fn database(&self) -> &Database {
        &self.db
    }

    pub fn bindings(&self) -> &Bindings {
        &self.bindings
    }

    pub fn set_unify_observer(&mut self, observer: Option<UnifyObserver>) {
        self.observer = observer;
    }

    pub fn rename_clause(&mut self, clause: &Clause) -> RenamedClause {
        clause.rename(&mut self.bindings)
    }

    /// Writes a term with the current operator table.
    pub fn format_term(&self, t: &Term) -> String {
        write_term(t, &self.ops, true)
    }

    /// Adds clauses and runs directives in order, stopping at the first error.
    pub fn consult(&mut self, clauses: impl IntoIterator<Item = ParsedClause>) -> Result<(), PrologError> {
        for clause in clauses {
            match clause {
                ParsedClause::Clause { head, body } => self.db.add_clause(Clause::new(head, body)?)?,
                ParsedClause::Directive(goal) => {
                    self.run_directive(&goal)?;
                }
                ParsedClause::Query(goals) => {
                    self.run_directive(&Term::conjunction(goals))?;
                }
            }
        }
        Ok(())
    }

    /// Consults program text, skipping and reporting clauses that fail to load.
    pub fn consult_text(&mut self, text: &str) -> ConsultReport {
        let mut report = ConsultReport::default();
        let mut reader = ClauseReader::new(text);
        while let Some(item) = reader.next_clause(&mut self.ops) {
            // `?- G.` in a file runs like `:- G.`
            let item = item.map(|c| match c {
                ParsedClause::Query(goals) => ParsedClause::Directive(Term::conjunction(goals)),
                other => other,
            });
            match item {
                Err(e) => report.errors.push(e.into()),
                Ok(ParsedClause::Clause { head, body }) => {
                    match Clause::new(head, body).and_then(|c| self.db.add_clause(c)) {
                        Ok(()) => report.clauses += 1,
                        Err(e) => report.errors.push(e),
                    }
                }
                Ok(ParsedClause::Query(_)) => unreachable!("rewritten above"),
                Ok(ParsedClause::Directive(goal)) => {
                    report.directives += 1;
                    match self.run_directive(&goal) {
                        Ok(true) => {}
                        Ok(false) => report
                            .warnings
                            .push(format!("directive failed: {}", self.format_term(&goal))),
                        Err(e) => report.errors.push(e),
                    }
                }
            }
        }
        report
    }

    pub fn consult_file(&mut self, path: impl AsRef<Path>) -> std::io::Result<ConsultReport> {
        let text = std::fs::read_to_string(path)?;
        Ok(self.consult_text(&text))
    }

    /// Solves `goal` once, keeping no bindings.
    pub fn run_directive(&mut self, goal: &Term) -> Result<bool, PrologError> {
        let mut solutions = self.solve(std::slice::from_ref(goal));
        match solutions.next() {
            None => Ok(false),
            Some(Ok(_)) => Ok(true),
            Some(Err(e)) => Err(e),
        }
    }

    /// Parses query text with the current operator table and starts solving it.
    pub fn query(&mut self, text: &str) -> Result<Solutions<'_>, PrologError> {
        let goals = parse_query(text, &self.ops)?;
        Ok(self.solve(&goals))
    }

    /// A lazy stream over the solutions of a goal sequence. The goals'
    /// variables are copied into fresh machine variables first.
    pub fn solve(&mut self, goals: &[Term]) -> Solutions<'_> {
        let start = self.bindings.mark();
        let mut renamed: Vec<(VarId, Var)> = Vec::new();
        let mut copy = |v: &Var, bindings: &mut Bindings| -> Term {
            if let Some((_, fresh)) = renamed.iter().find(|(id, _)| *id == v.id()) {
                return Term::Var(fresh.clone());
            }
            let id = bindings.fresh_var().id();
            let fresh = Var::with_name(id, v.name_arc());
            renamed.push((v.id(), fresh.clone()));
            Term::Var(fresh)
        };
        let bindings = &mut self.bindings;
        let goals: Vec<Term> = goals
            .iter()
            .map(|g| g.map_vars(&mut |v: &Var| copy(v, bindings)))
            .collect();
        let query_vars = renamed
            .into_iter()
            .map(|(_, v)| v)
            .filter(|v| v.name().is_some_and(|n| n != "_"))
            .collect();
        let mut list = Goals::default();
        for g in goals.into_iter().rev() {
            list = list.push(Goal::Call { term: g, cut_to: 0 });
        }
        Solutions {
            machine: self,
            goals: list,
            choices: Vec::new(),
            query_vars,
            start,
            steps: 0,
            state: State::Fresh,
        }
    }
}

/// One answer: the named query variables with their resolved values.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    bindings: Vec<(String, Term)>,
}

impl Solution {
    pub fn get(&self, name: &str) -> Option<&Term> {
        self.bindings.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.bindings.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// `Name = value` lines, omitting variables that are still unbound.
    /// Fresh variables print as `_A`, `_B`, ... consistently across lines.
    pub fn lines(&self, ops: &OperatorTable) -> Vec<String> {
        let mut writer = TermWriter::new(ops, true);
        self.bindings
            .iter()
            .filter(|(name, t)| !matches!(t, Term::Var(v) if v.name() == Some(name.as_str())))
            .map(|(name, t)| format!("{} = {}", name, writer.write_bounded(t, 699)))
            .collect()
    }
}

#[derive(Clone, Debug)]
enum Goal {
    Call { term: Term, cut_to: usize },
    /// Removes every choice point above the given height.
    CutTo(usize),
}

struct GoalNode {
    goal: Goal,
    next: Goals,
}

/// Persistent goal list: pushing shares the tail, so snapshots are O(1).
#[derive(Clone, Default)]
struct Goals(Option<Rc<GoalNode>>);

impl Goals {
    fn push(&self, goal: Goal) -> Goals {
        Goals(Some(Rc::new(GoalNode {
            goal,
            next: self.clone(),
        })))
    }

    fn pop(&self) -> Option<(Goal, Goals)> {
        self.0
            .as_ref()
            .map(|node| (node.goal.clone(), node.next.clone()))
    }
}

impl Drop for Goals {
    fn drop(&mut self) {
        let mut cur = self.0.take();
        while let Some(rc) = cur {
            match Rc::try_unwrap(rc) {
                Ok(mut node) => cur = node.next.0.take(),
                Err(_) => break,
            }
        }
    }
}

enum Alternative {
    /// Continue with the saved goal list.
    Resume,
    /// Try the remaining clauses of a user relation.
    Clauses {
        goal: Term,
        pred: Arc<Predicate>,
        next: usize,
    },
    /// Enumerate the remaining clauses for `clause/2`.
    ClauseScan {
        head: Term,
        body: Term,
        pred: Arc<Predicate>,
        next: usize,
    },
}

struct ChoicePoint {
    mark: Mark,
    cont: Goals,
    alt: Alternative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Fresh,
    Suspended,
    Done,
}

/// Pull-based solution stream. Dropping it, or running it to the end,
/// restores the machine's bindings to their state before the query.
pub struct Solutions<'m> {
    machine: &'m mut Machine,
    goals: Goals,
    choices: Vec<ChoicePoint>,
    query_vars: Vec<Var>,
    start: Mark,
    steps: u64,
    state: State,
}

impl Iterator for Solutions<'_> {
    type Item = Result<Solution, PrologError>;

    fn next(&mut self) -> Option<Self::Item> {
        let found = match self.state {
            State::Done => return None,
            State::Fresh => self.run(),
            State::Suspended => match self.backtrack() {
                Ok(true) => self.run(),
                other => other,
            },
        };
        match found.and_then(|found| if found { self.answer().map(Some) } else { Ok(None) }) {
            Ok(Some(solution)) => {
                self.state = State::Suspended;
                Some(Ok(solution))
            }
            Ok(None) => {
                self.finish();
                None
            }
            Err(e) => {
                self.finish();
                Some(Err(e))
            }
        }
    }
}

impl Drop for Solutions<'_> {
    fn drop(&mut self) {
        self.finish();
    }
}

impl Solutions<'_> {
    /// Names of the reported query variables, in order of first occurrence.
    pub fn variable_names(&self) -> Vec<String> {
        self.query_vars
            .iter()
            .filter_map(|v| v.name().map(str::to_string))
            .collect()
    }

    /// Goals executed so far by this query.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn finish(&mut self) {
        if self.state == State::Done {
            return;
        }
        self.state = State::Done;
        self.choices.clear();
        self.goals = Goals::default();
        self.machine.bindings.undo_to(self.start);
    }

    fn answer(&self) -> Result<Solution, PrologError> {
        let bindings = self
            .query_vars
            .iter()
            .map(|v| {
                let value = self.machine.bindings.resolve(&Term::Var(v.clone()))?;
                Ok((v.name().unwrap_or("_").to_string(), value))
            })
            .collect::<Result<_, PrologError>>()?;
        Ok(Solution { bindings })
    }

    fn run(&mut self) -> Result<bool, PrologError> {
        loop {
            let Some((goal, rest)) = self.goals.pop() else {
                return Ok(true);
            };
            self.goals = rest;
            let ok = match goal {
                Goal::CutTo(height) => {
                    self.cut(height);
                    true
                }
                Goal::Call { term, cut_to } => {
                    self.count_step()?;
                    self.call(term, cut_to)?
                }
            };
            if !ok && !self.backtrack()? {
                return Ok(false);
            }
        }
    }

    fn count_step(&mut self) -> Result<(), PrologError> {
        self.steps += 1;
        match self.machine.step_limit {
            Some(limit) if self.steps > limit => Err(PrologError::Resource(format!(
                "step budget of {} exceeded",
                limit
            ))),
            _ => Ok(()),
        }
    }

    fn cut(&mut self, height: usize) {
        self.choices.truncate(height);
    }

    fn push_choice(&mut self, cont: Goals, alt: Alternative) {
        self.choices.push(ChoicePoint {
            mark: self.machine.bindings.mark(),
            cont,
            alt,
        });
    }

    fn push_goal(&mut self, term: Term, cut_to: usize) {
        self.goals = self.goals.push(Goal::Call { term, cut_to });
    }

    /// Resumes the most recent choice point; false when none is left.
    fn backtrack(&mut self) -> Result<bool, PrologError> {
        while let Some(cp) = self.choices.pop() {
            self.machine.bindings.undo_to(cp.mark);
            match cp.alt {
                Alternative::Resume => {
                    self.goals = cp.cont;
                    return Ok(true);
                }
                Alternative::Clauses { goal, pred, next } => {
                    if self.try_clauses(goal, pred, next, cp.cont) {
                        return Ok(true);
                    }
                }
                Alternative::ClauseScan {
                    head,
                    body,
                    pred,
                    next,
                } => {
                    if self.scan_clauses(head, body, pred, next, cp.cont) {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    fn call(&mut self, term: Term, cut_to: usize) -> Result<bool, PrologError> {
        // a variable goal is called like call/1: cut inside it stays local
        let (term, cut_to) = match &term {
            Term::Var(_) => {
                let value = self.machine.bindings.deref(&term).clone();
                if value.is_var() {
                    return Err(PrologError::Instantiation(
                        "goal is an unbound variable".into(),
                    ));
                }
                (value, self.choices.len())
            }
            _ => (term, cut_to),
        };
        let (name, arity) = match &term {
            Term::Atom(a) => (a.clone(), 0),
            Term::Compound(c) => (c.functor().clone(), c.arity()),
            Term::Int(_) | Term::Float(_) => {
                return Err(PrologError::Type {
                    expected: "callable",
                    culprit: self.machine.format_term(&term),
                })
            }
            Term::Var(_) => unreachable!("dereferenced above"),
        };
        let args = term.args();
        match (name.as_str(), arity) {
            ("true", 0) => Ok(true),
            ("fail", 0) => Ok(false),
            ("!", 0) => {
                self.cut(cut_to);
                Ok(true)
            }
            (",", 2) => {
                self.push_goal(args[1].clone(), cut_to);
                self.push_goal(args[0].clone(), cut_to);
                Ok(true)
            }
            (";", 2) => {
                let left = self.machine.bindings.deref(&args[0]).clone();
                if left.is_functor(&atoms::arrow(), 2) {
                    let height = self.choices.len();
                    let else_branch = self.goals.push(Goal::Call {
                        term: args[1].clone(),
                        cut_to,
                    });
                    self.push_choice(else_branch, Alternative::Resume);
                    self.push_if_then(&left.args()[0], &left.args()[1], cut_to, height);
                } else {
                    let right = self.goals.push(Goal::Call {
                        term: args[1].clone(),
                        cut_to,
                    });
                    self.push_choice(right, Alternative::Resume);
                    self.push_goal(args[0].clone(), cut_to);
                }
                Ok(true)
            }
            ("->", 2) => {
                let height = self.choices.len();
                self.push_if_then(&args[0], &args[1], cut_to, height);
                Ok(true)
            }
            ("not", 1) => {
                let height = self.choices.len();
                self.push_choice(self.goals.clone(), Alternative::Resume);
                self.push_goal(Term::Atom(atoms::fail()), cut_to);
                self.goals = self.goals.push(Goal::CutTo(height));
                self.push_goal(args[0].clone(), height + 1);
                Ok(true)
            }
            ("call", 1) => {
                let height = self.choices.len();
                self.push_goal(args[0].clone(), height);
                Ok(true)
            }
            ("clause", 2) => self.clause(&args[0], &args[1]),
            (name_str, _) => {
                let mut ctx = Context {
                    bindings: &mut self.machine.bindings,
                    ops: &mut self.machine.ops,
                    occur_check: self.machine.occur_check,
                };
                if let Some(result) = builtins::call_det(&mut ctx, name_str, args) {
                    return result;
                }
                let pred = match self.machine.db.get(&name, arity) {
                    Some(p) => p.clone(),
                    None => {
                        return Err(PrologError::Existence(format!("{}/{}", name, arity)));
                    }
                };
                let cont = self.goals.clone();
                Ok(self.try_clauses(term, pred, 0, cont))
            }
        }
    }

    /// Schedules `cond`, then a cut back to `height`, then `then`.
    fn push_if_then(&mut self, cond: &Term, then: &Term, cut_to: usize, height: usize) {
        self.push_goal(then.clone(), cut_to);
        self.goals = self.goals.push(Goal::CutTo(height));
        // cut inside the condition is local to it
        let local = self.choices.len();
        self.push_goal(cond.clone(), local);
    }

    /// Resolves `goal` against the clauses of `pred` from index `start`.
    fn try_clauses(&mut self, goal: Term, pred: Arc<Predicate>, start: usize, cont: Goals) -> bool {
        let height = self.choices.len();
        let clauses = pred.clauses();
        for i in start..clauses.len() {
            let clause = &clauses[i];
            let mark = self.machine.bindings.mark();
            let base = self.machine.bindings.reserve(clause.var_count());
            let head = clause.head_at(base);
            let unified = self.unify_head(&goal, &head);
            if unified {
                let mut goals = cont.clone();
                for g in clause.body_at(base).collect::<Vec<_>>().into_iter().rev() {
                    goals = goals.push(Goal::Call {
                        term: g,
                        cut_to: height,
                    });
                }
                if i + 1 < clauses.len() {
                    self.choices.push(ChoicePoint {
                        mark,
                        cont,
                        alt: Alternative::Clauses {
                            goal,
                            pred: pred.clone(),
                            next: i + 1,
                        },
                    });
                }
                self.goals = goals;
                return true;
            }
            self.machine.bindings.undo_to(mark);
        }
        false
    }

    fn unify_head(&mut self, goal: &Term, head: &Term) -> bool {
        let occur_check = self.machine.occur_check;
        if self.machine.observer.is_none() {
            return unify(goal, head, &mut self.machine.bindings, occur_check);
        }
        let resolved = self.machine.bindings.resolve(goal);
        let unified = unify(goal, head, &mut self.machine.bindings, occur_check);
        if let (Ok(goal), Some(observer)) = (resolved, self.machine.observer.as_mut()) {
            observer(&HeadUnification {
                goal,
                head: head.clone(),
                occur_check,
                unified,
            });
        }
        unified
    }

    fn clause(&mut self, head: &Term, body: &Term) -> Result<bool, PrologError> {
        let head = self.machine.bindings.deref(head).clone();
        let (name, arity) = match &head {
            Term::Var(_) => {
                return Err(PrologError::Instantiation("clause/2 head is unbound".into()))
            }
            Term::Int(_) | Term::Float(_) => {
                return Err(PrologError::Type {
                    expected: "callable",
                    culprit: self.machine.format_term(&head),
                })
            }
            other => other.indicator().expect("callable"),
        };
        if builtins::is_builtin(name.as_str(), arity) {
            return Err(PrologError::Permission(format!(
                "access private_procedure {}/{}",
                name, arity
            )));
        }
        let Some(pred) = self.machine.db.get(&name, arity).cloned() else {
            return Ok(false);
        };
        let cont = self.goals.clone();
        Ok(self.scan_clauses(head, body.clone(), pred, 0, cont))
    }

    fn scan_clauses(&mut self, head: Term, body: Term, pred: Arc<Predicate>, start: usize, cont: Goals) -> bool {
        let clauses = pred.clauses();
        let occur_check = self.machine.occur_check;
        for i in start..clauses.len() {
            let clause = &clauses[i];
            let mark = self.machine.bindings.mark();
            let base = self.machine.bindings.reserve(clause.var_count());
            let b = &mut self.machine.bindings;
            if unify(&head, &clause.head_at(base), b, occur_check)
                && unify(&body, &clause.body_term_at(base), b, occur_check)
            {
                if i + 1 < clauses.len() {
                    self.choices.push(ChoicePoint {
                        mark,
                        cont: cont.clone(),
                        alt: Alternative::ClauseScan {
                            head,
                            body,
                            pred: pred.clone(),
                            next: i + 1,
                        },
                    });
                }
                self.goals = cont;
                return true;
            }
            self.machine.bindings.undo_to(mark);
        }
        false
    }
}
