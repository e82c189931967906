pub mod builtins;
pub mod cli;
pub mod engine;
pub mod error;
pub mod syntax;
pub mod terms;
pub mod unify;

pub use engine::{Clause, ConsultReport, Database, Machine, Solution, Solutions};
pub use error::{PrologError, SyntaxError};
pub use syntax::{parse_program, parse_query, parse_term_str, write_term, OperatorTable, ParsedClause};
pub use terms::{apply_substitution, compose, Atom, Bindings, Substitution, Term, Var};
pub use unify::{mm_solve, unify, EquationSet, UnifyOutcome};
