mod database;
mod machine;

pub use database::{rename_clause, Clause, Database, Predicate, PredicateKey, RenamedClause};
pub use machine::{ConsultReport, HeadUnification, Machine, Solution, Solutions, UnifyObserver};
