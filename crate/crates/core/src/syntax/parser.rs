use crate::error::SyntaxError;
use crate::terms::{atoms, Atom, Term, Var};

use super::lexer::{Lexer, Token, TokenKind};
use super::ops::{OpType, OperatorTable, MAX_PRIORITY};

/// One unit of program text.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedClause {
    /// `:- Goal.`
    Directive(Term),
    /// `Head :- B1, ..., Bn.` or a fact when `body` is empty.
    Clause { head: Term, body: Vec<Term> },
    /// A query: a goal sequence.
    Query(Vec<Term>),
}

/// Variables of one clause or query. Ids are local, starting at 0.
#[derive(Default)]
struct VarScope {
    named: Vec<(String, Var)>,
    next: usize,
}

impl VarScope {
    fn lookup(&mut self, name: &str) -> Var {
        if name == "_" {
            let v = Var::new(self.next);
            self.next += 1;
            return v;
        }
        if let Some((_, v)) = self.named.iter().find(|(n, _)| n == name) {
            return v.clone();
        }
        let v = Var::named(self.next, name);
        self.next += 1;
        self.named.push((name.to_string(), v.clone()));
        v
    }
}

struct TermParser<'t> {
    tokens: &'t [Token],
    pos: usize,
    ops: &'t OperatorTable,
    vars: VarScope,
    /// Inside an argument list or list brackets `,` separates items
    /// instead of acting as an operator.
    comma_separates: bool,
}

impl<'t> TermParser<'t> {
    fn new(tokens: &'t [Token], ops: &'t OperatorTable) -> Self {
        TermParser {
            tokens,
            pos: 0,
            ops,
            vars: VarScope::default(),
            comma_separates: false,
        }
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + offset)
    }

    fn advance(&mut self) -> Option<&'t Token> {
        let tok = self.tokens.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn error_here(&self, message: impl Into<String>) -> SyntaxError {
        let (line, column) = match self.peek().or_else(|| self.tokens.last()) {
            Some(t) => (t.line, t.column),
            None => (1, 1),
        };
        SyntaxError::new(message, line, column)
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(t) if t.is_punct(p) => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error_here(format!("expected `{}`, found `{}`", p, t.text))),
            None => Err(self.error_here(format!("expected `{}`, found end of clause", p))),
        }
    }

    fn at_terminator(&self) -> bool {
        match self.peek() {
            None => true,
            Some(t) => {
                t.kind == TokenKind::End
                    || (t.kind == TokenKind::Punct && matches!(t.text.as_str(), ")" | "]" | "}" | "," | "|"))
            }
        }
    }

    /// Name of the operator candidate at the current position, if any.
    fn infix_candidate(&self) -> Option<&'t str> {
        let tok = self.peek()?;
        match tok.kind {
            TokenKind::Name => Some(tok.text.as_str()),
            TokenKind::Punct if tok.text == "," => Some(","),
            _ => None,
        }
    }

    fn parse(&mut self, max: u16) -> Result<(Term, u16), SyntaxError> {
        let (mut left, mut left_priority) = self.parse_primary(max)?;
        while let Some(name) = self.infix_candidate() {
            if name == "," && self.comma_separates {
                break;
            }
            if let Some(def) = self.ops.infix(name) {
                let (left_max, right_max) = def.arg_limits();
                if def.priority <= max && left_priority <= left_max {
                    self.pos += 1;
                    let (right, _) = self.parse(right_max)?;
                    left = Term::from_parts(Atom::new(name), vec![left, right]);
                    left_priority = def.priority;
                    continue;
                }
            }
            if let Some(def) = self.ops.postfix(name) {
                let (left_max, _) = def.arg_limits();
                if def.priority <= max && left_priority <= left_max {
                    self.pos += 1;
                    left = Term::from_parts(Atom::new(name), vec![left]);
                    left_priority = def.priority;
                    continue;
                }
            }
            break;
        }
        Ok((left, left_priority))
    }

    /// One argument or list element. Operators above 999 are accepted as
    /// long as they are not `,`, so `f(S arrow T)` reads without brackets.
    fn parse_item(&mut self) -> Result<Term, SyntaxError> {
        let saved = std::mem::replace(&mut self.comma_separates, true);
        let item = self.parse(MAX_PRIORITY);
        self.comma_separates = saved;
        Ok(item?.0)
    }

    fn parse_nested(&mut self) -> Result<Term, SyntaxError> {
        let saved = std::mem::replace(&mut self.comma_separates, false);
        let term = self.parse(MAX_PRIORITY);
        self.comma_separates = saved;
        Ok(term?.0)
    }

    fn parse_arguments(&mut self) -> Result<Vec<Term>, SyntaxError> {
        let mut args = vec![self.parse_item()?];
        loop {
            match self.peek() {
                Some(t) if t.is_punct(",") => {
                    self.pos += 1;
                    args.push(self.parse_item()?);
                }
                Some(t) if t.is_punct(")") => {
                    self.pos += 1;
                    return Ok(args);
                }
                _ => return Err(self.error_here("expected `,` or `)` in argument list")),
            }
        }
    }

    fn parse_list(&mut self) -> Result<Term, SyntaxError> {
        let mut items = vec![self.parse_item()?];
        loop {
            match self.peek() {
                Some(t) if t.is_punct(",") => {
                    self.pos += 1;
                    items.push(self.parse_item()?);
                }
                Some(t) if t.is_punct("|") => {
                    self.pos += 1;
                    let tail = self.parse_item()?;
                    self.expect_punct("]")?;
                    return Ok(Term::list_with_tail(items, tail));
                }
                Some(t) if t.is_punct("]") => {
                    self.pos += 1;
                    return Ok(Term::list(items));
                }
                _ => return Err(self.error_here("expected `,`, `|` or `]` in list")),
            }
        }
    }

    /// Whether a prefix operator at the current position (already consumed)
    /// should be read as a plain atom rather than applied to an operand.
    fn prefix_op_is_atom(&self) -> bool {
        if self.at_terminator() {
            return true;
        }
        match self.peek() {
            Some(t) if t.kind == TokenKind::Name => {
                let followed_by_paren = self
                    .peek_at(1)
                    .is_some_and(|n| n.is_punct("(") && !n.layout_before);
                self.ops.infix(&t.text).is_some()
                    && self.ops.prefix(&t.text).is_none()
                    && !followed_by_paren
                    && !self.peek_at(1).is_none_or(|n| n.kind == TokenKind::End)
            }
            _ => false,
        }
    }

    fn parse_primary(&mut self, max: u16) -> Result<(Term, u16), SyntaxError> {
        let Some(tok) = self.advance() else {
            return Err(self.error_here("unexpected end of clause"));
        };
        match &tok.kind {
            TokenKind::Integer(n) => Ok((Term::Int(*n), 0)),
            TokenKind::Float(x) => Ok((Term::Float(*x), 0)),
            TokenKind::Variable => Ok((Term::Var(self.vars.lookup(&tok.text)), 0)),
            TokenKind::End => Err(SyntaxError::new("unexpected end of clause", tok.line, tok.column)),
            TokenKind::Punct => match tok.text.as_str() {
                "(" => {
                    let t = self.parse_nested()?;
                    self.expect_punct(")")?;
                    Ok((t, 0))
                }
                "[" => {
                    if self.peek().is_some_and(|t| t.is_punct("]")) {
                        self.pos += 1;
                        return self.after_name(atoms::nil(), false, max);
                    }
                    Ok((self.parse_list()?, 0))
                }
                "{" => {
                    if self.peek().is_some_and(|t| t.is_punct("}")) {
                        self.pos += 1;
                        return self.after_name(atoms::curly(), false, max);
                    }
                    let t = self.parse_nested()?;
                    self.expect_punct("}")?;
                    Ok((Term::from_parts(atoms::curly(), vec![t]), 0))
                }
                other => Err(SyntaxError::new(
                    format!("unexpected `{}`", other),
                    tok.line,
                    tok.column,
                )),
            },
            TokenKind::Name => self.after_name(Atom::new(&tok.text), tok.quoted, max),
        }
    }

    fn after_name(&mut self, name: Atom, quoted: bool, max: u16) -> Result<(Term, u16), SyntaxError> {
        // functional notation: the `(` must follow the name immediately
        if let Some(t) = self.peek() {
            if t.is_punct("(") && !t.layout_before {
                self.pos += 1;
                let args = self.parse_arguments()?;
                return Ok((Term::from_parts(name, args), 0));
            }
        }
        if !quoted && name.as_str() == "-" {
            if let Some(t) = self.peek() {
                match t.kind {
                    TokenKind::Integer(n) => {
                        self.pos += 1;
                        return Ok((Term::Int(-n), 0));
                    }
                    TokenKind::Float(x) => {
                        self.pos += 1;
                        return Ok((Term::Float(-x), 0));
                    }
                    _ => {}
                }
            }
        }
        if let Some(def) = self.ops.prefix(name.as_str()) {
            if !self.prefix_op_is_atom() {
                if def.priority > max {
                    return Err(self.error_here(format!(
                        "operator priority clash: prefix `{}` ({}) where at most {} is allowed",
                        name, def.priority, max
                    )));
                }
                let arg_max = match def.kind {
                    OpType::Fy => def.priority,
                    _ => def.priority - 1,
                };
                let (arg, _) = self.parse(arg_max)?;
                return Ok((Term::from_parts(name, vec![arg]), def.priority));
            }
        }
        Ok((Term::Atom(name), 0))
    }
}

/// Parses one term from a token slice. A single trailing end token is allowed.
pub fn parse_term(tokens: &[Token], table: &OperatorTable, max_priority: u16) -> Result<Term, SyntaxError> {
    let tokens = match tokens.last() {
        Some(t) if t.kind == TokenKind::End => &tokens[..tokens.len() - 1],
        _ => tokens,
    };
    let mut parser = TermParser::new(tokens, table);
    let (term, _) = parser.parse(max_priority)?;
    if let Some(t) = parser.peek() {
        return Err(SyntaxError::new(
            format!("operator priority clash or unexpected `{}`", t.text),
            t.line,
            t.column,
        ));
    }
    Ok(term)
}

/// Tokenizes and parses a single term at priority 1200.
pub fn parse_term_str(text: &str, table: &OperatorTable) -> Result<Term, SyntaxError> {
    let tokens = super::tokenize(text)?;
    if tokens.is_empty() {
        return Err(SyntaxError::new("empty input", 1, 1));
    }
    parse_term(&tokens, table, MAX_PRIORITY)
}

/// Splits a `','/2` chain into its conjuncts.
pub fn conjuncts(term: &Term) -> Vec<Term> {
    let comma = atoms::comma();
    let mut out = Vec::new();
    let mut cur = term.clone();
    loop {
        match &cur {
            Term::Compound(c) if c.functor() == &comma && c.arity() == 2 => {
                out.push(c.args()[0].clone());
                let next = c.args()[1].clone();
                cur = next;
            }
            _ => {
                out.push(cur);
                return out;
            }
        }
    }
}

fn clause_from_term(term: Term, line: usize, column: usize) -> Result<ParsedClause, SyntaxError> {
    let neck = atoms::neck();
    if let Term::Compound(c) = &term {
        if c.functor() == &neck && c.arity() == 1 {
            return Ok(ParsedClause::Directive(c.args()[0].clone()));
        }
        if c.functor().as_str() == "?-" && c.arity() == 1 {
            return Ok(ParsedClause::Query(conjuncts(&c.args()[0])));
        }
        if c.functor() == &neck && c.arity() == 2 {
            let head = c.args()[0].clone();
            check_head(&head, line, column)?;
            return Ok(ParsedClause::Clause {
                head,
                body: conjuncts(&c.args()[1]),
            });
        }
    }
    check_head(&term, line, column)?;
    Ok(ParsedClause::Clause {
        head: term,
        body: Vec::new(),
    })
}

fn check_head(head: &Term, line: usize, column: usize) -> Result<(), SyntaxError> {
    match head {
        Term::Var(_) => Err(SyntaxError::new("clause head is a variable", line, column)),
        Term::Int(_) | Term::Float(_) => Err(SyntaxError::new("clause head is a number", line, column)),
        _ => Ok(()),
    }
}

/// Reads program text clause by clause. `op/3` directives update the
/// operator table as soon as they are read, so they affect later clauses.
pub struct ClauseReader {
    lexer: Lexer,
    finished: bool,
}

impl ClauseReader {
    pub fn new(text: &str) -> ClauseReader {
        ClauseReader {
            lexer: Lexer::new(text),
            finished: false,
        }
    }

    /// The next clause, or `None` at end of input. After an error the reader
    /// resumes at the following clause.
    pub fn next_clause(&mut self, table: &mut OperatorTable) -> Option<Result<ParsedClause, SyntaxError>> {
        if self.finished {
            return None;
        }
        let mut tokens: Vec<Token> = Vec::new();
        loop {
            match self.lexer.next_token() {
                Err(e) => {
                    self.lexer.skip_past_full_stop();
                    return Some(Err(e));
                }
                Ok(None) => {
                    self.finished = true;
                    if tokens.is_empty() {
                        return None;
                    }
                    let (line, column) = self.lexer.position();
                    return Some(Err(SyntaxError::new(
                        "missing full stop at end of clause",
                        line,
                        column,
                    )));
                }
                Ok(Some(tok)) => {
                    let end = tok.kind == TokenKind::End;
                    tokens.push(tok);
                    if end {
                        break;
                    }
                }
            }
        }
        let (line, column) = (tokens[0].line, tokens[0].column);
        if tokens.len() == 1 {
            return Some(Err(SyntaxError::new("empty clause", line, column)));
        }
        let parsed = parse_term(&tokens, table, MAX_PRIORITY)
            .and_then(|t| clause_from_term(t, line, column));
        if let Ok(ParsedClause::Directive(goal)) = &parsed {
            apply_op_directive(goal, table);
        }
        Some(parsed)
    }
}

/// Applies `op(P, T, Name)` (or a list of names) to the table when well formed.
pub(crate) fn apply_op_directive(goal: &Term, table: &mut OperatorTable) -> bool {
    let Term::Compound(c) = goal else {
        return false;
    };
    if c.functor().as_str() != "op" || c.arity() != 3 {
        return false;
    }
    let (Term::Int(p), Term::Atom(kind)) = (&c.args()[0], &c.args()[1]) else {
        return false;
    };
    let Ok(priority) = u16::try_from(*p) else {
        return false;
    };
    let Ok(kind) = kind.as_str().parse::<OpType>() else {
        return false;
    };
    let names = match &c.args()[2] {
        Term::Atom(a) if a != &atoms::nil() => vec![a.clone()],
        list => {
            let mut names = Vec::new();
            let mut cur = list.clone();
            loop {
                match &cur {
                    Term::Atom(a) if a == &atoms::nil() => break,
                    Term::Compound(cell) if cell.functor() == &atoms::dot() && cell.arity() == 2 => {
                        let Term::Atom(n) = &cell.args()[0] else {
                            return false;
                        };
                        names.push(n.clone());
                        let next = cell.args()[1].clone();
                        cur = next;
                    }
                    _ => return false,
                }
            }
            names
        }
    };
    let mut staged = table.clone();
    for name in &names {
        if staged.declare(priority, kind, name.as_str()).is_err() {
            return false;
        }
    }
    *table = staged;
    true
}

/// Parses a whole program; stops at the first syntax error.
pub fn parse_program(text: &str, table: &mut OperatorTable) -> Result<Vec<ParsedClause>, SyntaxError> {
    let mut reader = ClauseReader::new(text);
    let mut out = Vec::new();
    while let Some(clause) = reader.next_clause(table) {
        out.push(clause?);
    }
    Ok(out)
}

/// Parses query text (the trailing full stop is optional) into its goals.
pub fn parse_query(text: &str, table: &OperatorTable) -> Result<Vec<Term>, SyntaxError> {
    let term = parse_term_str(text, table)?;
    Ok(conjuncts(&term))
}
