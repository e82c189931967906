//! Property suites shared by the `properties` tests and the acceptance run.
//! Each returns the number of cases checked or a description of the first
//! counterexample.

use std::collections::HashMap;

use purelog::syntax::TermWriter;
use purelog::unify::{mm_solve_with, Strategy};
use purelog::{
    apply_substitution, compose, mm_solve, parse_program, parse_term_str, unify, Bindings,
    EquationSet, Machine, OperatorTable, ParsedClause, Substitution, Term,
};

use super::gen::{pure_query, Gen};
use super::{corpus, variant};

pub const CASES: usize = 1000;

/// Textbook recursive unification with the occur-check over a triangular
/// map, kept deliberately separate from both library unifiers.
pub fn robinson(a: &Term, b: &Term) -> Option<HashMap<usize, Term>> {
    fn walk(t: &Term, s: &HashMap<usize, Term>) -> Term {
        let mut t = t.clone();
        while let Term::Var(v) = &t {
            match s.get(&v.id()) {
                Some(next) => t = next.clone(),
                None => break,
            }
        }
        t
    }
    fn occurs(id: usize, t: &Term, s: &HashMap<usize, Term>) -> bool {
        match walk(t, s) {
            Term::Var(v) => v.id() == id,
            Term::Compound(c) => c.args().iter().any(|x| occurs(id, x, s)),
            _ => false,
        }
    }
    fn go(a: &Term, b: &Term, s: &mut HashMap<usize, Term>) -> bool {
        let (a, b) = (walk(a, s), walk(b, s));
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x.id() == y.id() => true,
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if occurs(x.id(), t, s) {
                    return false;
                }
                s.insert(x.id(), t.clone());
                true
            }
            (Term::Compound(x), Term::Compound(y)) => {
                x.functor() == y.functor()
                    && x.arity() == y.arity()
                    && x.args().iter().zip(y.args()).all(|(p, q)| go(p, q, s))
            }
            _ => a == b,
        }
    }
    let mut s = HashMap::new();
    go(a, b, &mut s).then_some(s)
}

/// Fully applies a triangular map.
pub fn robinson_apply(t: &Term, s: &HashMap<usize, Term>) -> Term {
    match t {
        Term::Var(v) => match s.get(&v.id()) {
            Some(u) => robinson_apply(u, s),
            None => t.clone(),
        },
        Term::Compound(c) => Term::from_parts(
            c.functor().clone(),
            c.args().iter().map(|a| robinson_apply(a, s)).collect(),
        ),
        _ => t.clone(),
    }
}

fn pair(l: &Term, r: &Term) -> Term {
    Term::compound("p", vec![l.clone(), r.clone()])
}

fn show(t: &Term) -> String {
    TermWriter::new(&OperatorTable::default(), true).write(t)
}

fn solved_form(s: &Substitution) -> bool {
    s.domain()
        .all(|v| s.iter().all(|(_, t)| !t.contains_var(v)))
}

/// MM solver, engine unifier and the reference unifier agree on success,
/// and their unifiers coincide up to renaming.
pub fn mm_engine_agreement(seed: u64, cases: usize) -> Result<usize, String> {
    let mut g = Gen::new(seed, 3);
    let mut unified = 0;
    for case in 0..cases {
        let (l, r) = g.pair(4);
        let ctx = || format!("case {}: {} = {}", case, show(&l), show(&r));
        let reference = robinson(&l, &r);
        let eqs = EquationSet::single(l.clone(), r.clone());
        let mm = mm_solve(&eqs, true);
        let mm_last = mm_solve_with(&eqs, true, Strategy::LastEquation, None);
        let mut b = Bindings::new();
        b.reserve(g.vars);
        let engine = unify(&l, &r, &mut b, true);

        if mm.is_success() != reference.is_some()
            || engine != reference.is_some()
            || mm_last.is_success() != reference.is_some()
        {
            return Err(format!(
                "{}: reference {}, mm {}, mm(last) {}, engine {}",
                ctx(),
                reference.is_some(),
                mm.is_success(),
                mm_last.is_success(),
                engine
            ));
        }
        let Some(reference) = reference else { continue };
        unified += 1;
        let expected = robinson_apply(&pair(&l, &r), &reference);
        for (label, mgu) in [("mm", mm.mgu().unwrap()), ("mm(last)", mm_last.mgu().unwrap())] {
            if apply_substitution(&l, mgu) != apply_substitution(&r, mgu) {
                return Err(format!("{}: {} result {} is not a unifier", ctx(), label, mgu));
            }
            if !solved_form(mgu) {
                return Err(format!("{}: {} result {} not in solved form", ctx(), label, mgu));
            }
            if !variant(&apply_substitution(&pair(&l, &r), mgu), &expected) {
                return Err(format!("{}: {} result {} not most general", ctx(), label, mgu));
            }
        }
        let resolved = b.resolve(&pair(&l, &r)).map_err(|e| format!("{}: {}", ctx(), e))?;
        if !variant(&resolved, &expected) {
            return Err(format!("{}: engine gives {}", ctx(), show(&resolved)));
        }
        // without a cycle the occur-check never fires, so both modes agree
        let mut b = Bindings::new();
        b.reserve(g.vars);
        if !unify(&l, &r, &mut b, false) || !mm_solve(&eqs, false).is_success() {
            return Err(format!("{}: fails with the occur-check off", ctx()));
        }
    }
    if unified < cases / 5 {
        return Err(format!("only {} of {} pairs unified", unified, cases));
    }
    Ok(cases)
}

/// apply(apply(t, γ), δ) = apply(t, compose(γ, δ))
pub fn composition_law(seed: u64, cases: usize) -> Result<usize, String> {
    let mut g = Gen::new(seed, 4);
    for case in 0..cases {
        let t = g.term(3);
        let gamma = g.subst(2);
        let delta = g.subst(2);
        let lhs = apply_substitution(&apply_substitution(&t, &gamma), &delta);
        let composed = compose(&gamma, &delta);
        let rhs = apply_substitution(&t, &composed);
        if lhs != rhs {
            return Err(format!(
                "case {}: t = {}, γ = {}, δ = {}: {} vs {}",
                case,
                show(&t),
                gamma,
                delta,
                show(&lhs),
                show(&rhs)
            ));
        }
        if composed.iter().any(|(v, t)| matches!(t, Term::Var(w) if w == v)) {
            return Err(format!("case {}: identity binding in {}", case, composed));
        }
    }
    Ok(cases)
}

type Snapshot = (Vec<usize>, usize, usize, Vec<Result<Term, purelog::PrologError>>);

fn snapshot(b: &Bindings, vars: usize) -> Snapshot {
    let resolved = (0..vars)
        .map(|id| b.resolve(&Term::Var(super::gen::var(id))))
        .collect();
    (b.bound_set(), b.trail_len(), b.var_count(), resolved)
}

/// A failed unification leaves the bindings and trail exactly as found; a
/// successful one is fully undone by returning to the mark.
pub fn trail_purity(seed: u64, cases: usize) -> Result<usize, String> {
    let mut g = Gen::new(seed, 5);
    let mut failures = 0;
    let mut attempts = 0;
    while failures < cases {
        attempts += 1;
        if attempts > cases * 20 {
            return Err(format!("only {} failing unifications generated", failures));
        }
        let mut b = Bindings::new();
        b.reserve(g.vars);
        for _ in 0..g.below(3) {
            let v = Term::Var(super::gen::var(g.below(g.vars)));
            let t = g.term(2);
            unify(&v, &t, &mut b, true);
        }
        let before = snapshot(&b, g.vars);
        let mark = b.mark();
        let (l, r) = g.pair(4);
        if unify(&l, &r, &mut b, true) {
            b.undo_to(mark);
            if snapshot(&b, g.vars) != before {
                return Err(format!("undo after {} = {} left bindings behind", show(&l), show(&r)));
            }
        } else {
            failures += 1;
            if snapshot(&b, g.vars) != before {
                return Err(format!("failed {} = {} changed the bindings", show(&l), show(&r)));
            }
        }
    }
    Ok(failures)
}

fn clause_term(c: &ParsedClause) -> Term {
    match c {
        ParsedClause::Clause { head, body } if body.is_empty() => head.clone(),
        ParsedClause::Clause { head, body } => {
            Term::compound(":-", vec![head.clone(), Term::conjunction(body.clone())])
        }
        ParsedClause::Directive(d) => Term::compound(":-", vec![d.clone()]),
        ParsedClause::Query(q) => Term::compound("?-", vec![Term::conjunction(q.clone())]),
    }
}

fn round_trip_one(t: &Term, ops: &OperatorTable) -> Result<(), String> {
    let text = TermWriter::new(ops, true).write(t);
    let back = parse_term_str(&text, ops).map_err(|e| format!("{}: {}", text, e))?;
    if !variant(t, &back) {
        return Err(format!("{} reads back as {}", text, TermWriter::new(ops, true).write(&back)));
    }
    Ok(())
}

/// Writing a term and reading it back yields a variant, for every corpus
/// clause and for random terms filling up the case count.
pub fn round_trip(seed: u64, cases: usize) -> Result<usize, String> {
    let mut n = 0;
    let dir = corpus("");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pl"))
        .collect();
    files.sort();
    for path in files {
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let mut ops = OperatorTable::default();
        let clauses = parse_program(&text, &mut ops).map_err(|e| format!("{}: {}", path.display(), e))?;
        for c in &clauses {
            round_trip_one(&clause_term(c), &ops).map_err(|e| format!("{}: {}", path.display(), e))?;
            n += 1;
        }
    }
    let mut g = Gen::new(seed, 3);
    let ops = OperatorTable::default();
    while n < cases {
        let t = g.rich_term(4);
        round_trip_one(&t, &ops)?;
        n += 1;
    }
    Ok(n)
}

const ANSWER_LIMIT: usize = 8;

fn answers_upto(m: &mut Machine, query: &str) -> Result<(Vec<Vec<String>>, bool), String> {
    let ops = m.ops().clone();
    let mut out = Vec::new();
    let solutions = m.query(query).map_err(|e| format!("{}: {}", query, e))?;
    for s in solutions.take(ANSWER_LIMIT) {
        match s {
            Ok(s) => out.push(s.lines(&ops)),
            Err(e) if e.kind() == "resource_error" => return Ok((out, true)),
            Err(e) => return Err(format!("{}: {}", query, e)),
        }
    }
    Ok((out, false))
}

/// `solve(Q)` over the vanilla meta-interpreter gives the same answers, in
/// the same order, as running `Q` directly.
pub fn meta_interpreter(seed: u64, cases: usize) -> Result<usize, String> {
    let mut m = super::machine(&["append.pl", "member.pl", "sublist.pl", "solve.pl"]);
    m.set_step_limit(Some(20_000));
    let mut g = Gen::new(seed, 3);
    let mut answered = 0;
    for case in 0..cases {
        let q = pure_query(&mut g);
        let (direct, direct_cut) = answers_upto(&mut m, &format!("{}.", q))?;
        let (meta, meta_cut) = answers_upto(&mut m, &format!("solve(({})).", q))?;
        let same = if direct_cut || meta_cut {
            let k = direct.len().min(meta.len());
            direct[..k] == meta[..k]
        } else {
            direct == meta
        };
        if !same {
            return Err(format!("case {}: {}: direct {:?}, meta {:?}", case, q, direct, meta));
        }
        if !direct.is_empty() {
            answered += 1;
        }
    }
    if answered < cases / 4 {
        return Err(format!("only {} of {} queries had answers", answered, cases));
    }
    Ok(cases)
}
