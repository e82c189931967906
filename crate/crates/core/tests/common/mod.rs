#![allow(dead_code)]

pub mod gen;
pub mod props;

use std::collections::HashMap;
use std::path::PathBuf;

use purelog::{Machine, PrologError, Term};

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

/// A machine with the given corpus files consulted; any load problem panics.
pub fn machine(files: &[&str]) -> Machine {
    let mut m = Machine::new();
    for f in files {
        let report = m.consult_file(corpus(f)).expect("corpus file readable");
        assert!(report.errors.is_empty(), "{}: {:?}", f, report.errors);
        assert!(report.warnings.is_empty(), "{}: {:?}", f, report.warnings);
    }
    m
}

/// Every solution, rendered as its `Name = value` lines.
pub fn answers(m: &mut Machine, query: &str) -> Result<Vec<Vec<String>>, PrologError> {
    let ops = m.ops().clone();
    let mut out = Vec::new();
    for solution in m.query(query)? {
        out.push(solution?.lines(&ops));
    }
    Ok(out)
}

/// Solutions as resolved values of one variable.
pub fn values(m: &mut Machine, query: &str, var: &str) -> Result<Vec<Term>, PrologError> {
    let mut out = Vec::new();
    for solution in m.query(query)? {
        let solution = solution?;
        out.push(solution.get(var).cloned().expect("query variable"));
    }
    Ok(out)
}

pub fn count(m: &mut Machine, query: &str) -> Result<usize, PrologError> {
    let mut n = 0;
    for solution in m.query(query)? {
        solution?;
        n += 1;
    }
    Ok(n)
}

/// The first error a query raises, if any.
pub fn error_kind(m: &mut Machine, query: &str) -> Option<&'static str> {
    let solutions = match m.query(query) {
        Ok(s) => s,
        Err(e) => return Some(e.kind()),
    };
    for solution in solutions {
        if let Err(e) = solution {
            return Some(e.kind());
        }
    }
    None
}

/// Drops all layout so answers compare independently of spacing.
pub fn norm(text: &str) -> String {
    text.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Whether two terms are equal up to a consistent one-to-one renaming of variables.
pub fn variant(a: &Term, b: &Term) -> bool {
    fn walk(a: &Term, b: &Term, fwd: &mut HashMap<usize, usize>, back: &mut HashMap<usize, usize>) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let f = *fwd.entry(x.id()).or_insert(y.id());
                let g = *back.entry(y.id()).or_insert(x.id());
                f == y.id() && g == x.id()
            }
            (Term::Compound(x), Term::Compound(y)) => {
                x.functor() == y.functor()
                    && x.arity() == y.arity()
                    && x.args().iter().zip(y.args()).all(|(p, q)| walk(p, q, fwd, back))
            }
            (Term::Var(_), _) | (_, Term::Var(_)) => false,
            _ => a == b,
        }
    }
    walk(a, b, &mut HashMap::new(), &mut HashMap::new())
}

/// Reads a proper list of integers.
pub fn int_list(t: &Term) -> Option<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::Atom(a) if a.as_str() == "[]" => return Some(out),
            Term::Compound(c) if c.functor().as_str() == "." && c.arity() == 2 => {
                match &c.args()[0] {
                    Term::Int(n) => out.push(*n),
                    _ => return None,
                }
                cur = &c.args()[1];
            }
            _ => return None,
        }
    }
}

pub fn list_text(items: &[i64]) -> String {
    let parts: Vec<String> = items.iter().map(|n| n.to_string()).collect();
    format!("[{}]", parts.join(","))
}
