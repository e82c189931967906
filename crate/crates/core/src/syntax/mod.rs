mod lexer;
mod ops;
mod parser;
mod writer;

pub use lexer::{tokenize, Token, TokenKind};
pub use ops::{declare_op, Fixity, OpDef, OpType, OperatorTable, MAX_PRIORITY};
pub use parser::{
    conjuncts, parse_program, parse_query, parse_term, parse_term_str, ClauseReader, ParsedClause,
};
pub use writer::{atom_needs_quotes, write_term, TermWriter};

