use std::collections::HashMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOSError};
use pyo3::prelude::*;

use purelog::{OperatorTable, UnifyOutcome};

create_exception!(purelog_py, PrologError, PyException);

fn raise(e: purelog::PrologError) -> PyErr {
    PrologError::new_err(e.to_string())
}

/// An immutable term.
#[pyclass(name = "Term", module = "purelog_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTerm {
    inner: purelog::Term,
}

fn wrap(t: purelog::Term) -> PyTerm {
    PyTerm { inner: t }
}

#[pymethods]
impl PyTerm {
    /// Reads a term using the standard operator table.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyTerm> {
        parse_term(text)
    }

    #[getter]
    fn is_var(&self) -> bool {
        self.inner.is_var()
    }

    /// Functor name of a compound or atom; `None` for variables and numbers.
    #[getter]
    fn name(&self) -> Option<String> {
        match &self.inner {
            purelog::Term::Atom(a) => Some(a.as_str().to_string()),
            purelog::Term::Compound(c) => Some(c.functor().as_str().to_string()),
            _ => None,
        }
    }

    #[getter]
    fn args(&self) -> Vec<PyTerm> {
        self.inner.args().iter().cloned().map(wrap).collect()
    }

    /// The integer or float value of a number term.
    #[getter]
    fn value(&self, py: Python<'_>) -> PyResult<Option<Py<PyAny>>> {
        Ok(match &self.inner {
            purelog::Term::Int(n) => Some(n.into_pyobject(py)?.into_any().unbind()),
            purelog::Term::Float(x) => Some(x.into_pyobject(py)?.into_any().unbind()),
            _ => None,
        })
    }

    fn __str__(&self) -> String {
        purelog::write_term(&self.inner, &OperatorTable::default(), true)
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", self.__str__())
    }

    fn __eq__(&self, other: &PyTerm) -> bool {
        self.inner == other.inner
    }
}

/// Query text may omit the final full stop.
fn with_stop(text: &str) -> String {
    if text.trim_end().ends_with('.') {
        text.to_string()
    } else {
        format!("{}.", text)
    }
}

/// An interpreter session: a program database plus engine flags.
#[pyclass(name = "Machine", module = "purelog_py", unsendable)]
struct PyMachine {
    inner: purelog::Machine,
}

#[pymethods]
impl PyMachine {
    #[new]
    #[pyo3(signature = (occur_check = false, step_limit = None))]
    fn new(occur_check: bool, step_limit: Option<u64>) -> PyMachine {
        let mut inner = purelog::Machine::new();
        inner.set_occur_check(occur_check);
        inner.set_step_limit(step_limit);
        PyMachine { inner }
    }

    #[getter]
    fn occur_check(&self) -> bool {
        self.inner.occur_check()
    }

    #[setter]
    fn set_occur_check(&mut self, on: bool) {
        self.inner.set_occur_check(on);
    }

    /// Loads program text. Returns the number of clauses added; raises on
    /// the first rejected clause after loading the rest.
    fn consult(&mut self, text: &str) -> PyResult<usize> {
        let report = self.inner.consult_text(text);
        match report.errors.into_iter().next() {
            Some(e) => Err(raise(e)),
            None => Ok(report.clauses),
        }
    }

    fn consult_file(&mut self, path: &str) -> PyResult<usize> {
        let text = std::fs::read_to_string(path).map_err(|e| PyOSError::new_err(e.to_string()))?;
        self.consult(&text)
    }

    /// Up to `limit` answers (all when `None`), each a dict from query
    /// variable name to its value.
    #[pyo3(signature = (text, limit = None))]
    fn query(&mut self, text: &str, limit: Option<usize>) -> PyResult<Vec<HashMap<String, PyTerm>>> {
        let solutions = self.inner.query(&with_stop(text)).map_err(raise)?;
        let mut out = Vec::new();
        for s in solutions.take(limit.unwrap_or(usize::MAX)) {
            let s = s.map_err(raise)?;
            out.push(s.iter().map(|(n, t)| (n.to_string(), wrap(t.clone()))).collect());
        }
        Ok(out)
    }

    /// Answers rendered as `Name = value` lines, as the REPL prints them.
    #[pyo3(signature = (text, limit = None))]
    fn answers(&mut self, text: &str, limit: Option<usize>) -> PyResult<Vec<Vec<String>>> {
        let ops = self.inner.ops().clone();
        let solutions = self.inner.query(&with_stop(text)).map_err(raise)?;
        let mut out = Vec::new();
        for s in solutions.take(limit.unwrap_or(usize::MAX)) {
            out.push(s.map_err(raise)?.lines(&ops));
        }
        Ok(out)
    }

    /// Writes a term with this session's operator table.
    fn format(&self, term: &PyTerm) -> String {
        self.inner.format_term(&term.inner)
    }
}

#[pyfunction]
fn parse_term(text: &str) -> PyResult<PyTerm> {
    purelog::parse_term_str(text, &OperatorTable::default())
        .map(wrap)
        .map_err(|e| raise(e.into()))
}

/// Most general unifier of two terms as a dict keyed by variable name,
/// or `None` when they do not unify. Variables with the same name in the
/// two terms are the same variable.
#[pyfunction]
#[pyo3(signature = (left, right, occur_check = true))]
fn unify(left: &PyTerm, right: &PyTerm, occur_check: bool) -> Option<HashMap<String, PyTerm>> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut next = 0;
    let mut by_name = |v: &purelog::Var| {
        let id = match v.name() {
            Some(n) if n != "_" => *ids.entry(n.to_string()).or_insert_with(|| {
                next += 1;
                next - 1
            }),
            _ => {
                next += 1;
                next - 1
            }
        };
        match v.name() {
            Some(n) => purelog::Term::Var(purelog::Var::named(id, n)),
            None => purelog::Term::Var(purelog::Var::new(id)),
        }
    };
    let l = left.inner.map_vars(&mut by_name);
    let r = right.inner.map_vars(&mut by_name);
    let eqs = purelog::EquationSet::single(l, r);
    match purelog::mm_solve(&eqs, occur_check) {
        UnifyOutcome::Success(mgu) => Some(
            mgu.iter()
                .map(|(v, t)| {
                    let name = v.name().map(str::to_string).unwrap_or_else(|| format!("_G{}", v.id()));
                    (name, wrap(t.clone()))
                })
                .collect(),
        ),
        UnifyOutcome::Failure(_) => None,
    }
}

#[pymodule]
fn purelog_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTerm>()?;
    m.add_class::<PyMachine>()?;
    m.add_function(wrap_pyfunction!(parse_term, m)?)?;
    m.add_function(wrap_pyfunction!(unify, m)?)?;
    m.add("PrologError", m.py().get_type::<PrologError>())?;
    Ok(())
}
