use crate::error::SyntaxError;

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    Name,
    Variable,
    Integer(i64),
    Float(f64),
    Punct,
    /// The clause-terminating full stop.
    End,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: usize,
    pub column: usize,
    /// Whitespace or a comment precedes this token.
    pub layout_before: bool,
    pub quoted: bool,
}

impl Token {
    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punct && self.text == p
    }

    pub fn is_name(&self) -> bool {
        self.kind == TokenKind::Name
    }
}

pub(crate) fn is_symbol_char(c: char) -> bool {
    matches!(
        c,
        '+' | '-' | '*' | '/' | '\\' | '^' | '<' | '>' | '=' | '~' | ':' | '.' | '?' | '@' | '#'
            | '&' | '$'
    )
}

pub(crate) fn is_alnum(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub(crate) struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    pub(crate) fn new(text: &str) -> Lexer {
        Lexer {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    /// Error recovery: drops input up to and including the next full stop.
    pub(crate) fn skip_past_full_stop(&mut self) {
        while let Some(c) = self.bump() {
            if c == '.' && self.peek().is_none_or(|n| n.is_whitespace() || n == '%') {
                return;
            }
        }
    }

    pub(crate) fn position(&self) -> (usize, usize) {
        (self.line, self.column)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::new(message, self.line, self.column)
    }

    /// Skips whitespace and comments; reports whether anything was skipped.
    fn skip_layout(&mut self) -> Result<bool, SyntaxError> {
        let mut skipped = false;
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                    skipped = true;
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                    skipped = true;
                }
                Some('/') if self.peek_at(1) == Some('*') => {
                    let (line, column) = (self.line, self.column);
                    self.bump();
                    self.bump();
                    loop {
                        match self.bump() {
                            Some('*') if self.peek() == Some('/') => {
                                self.bump();
                                break;
                            }
                            Some(_) => {}
                            None => {
                                return Err(SyntaxError::new("unterminated block comment", line, column))
                            }
                        }
                    }
                    skipped = true;
                }
                _ => return Ok(skipped),
            }
        }
    }

    pub(crate) fn next_token(&mut self) -> Result<Option<Token>, SyntaxError> {
        let layout_before = self.skip_layout()?;
        let (line, column) = (self.line, self.column);
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let make = |kind, text: String, quoted| Token {
            kind,
            text,
            line,
            column,
            layout_before,
            quoted,
        };
        if c.is_ascii_digit() {
            return self.number().map(|(kind, text)| Some(make(kind, text, false)));
        }
        if c == '_' || c.is_uppercase() {
            let text = self.take_while(is_alnum);
            return Ok(Some(make(TokenKind::Variable, text, false)));
        }
        if c.is_alphabetic() {
            let text = self.take_while(is_alnum);
            return Ok(Some(make(TokenKind::Name, text, false)));
        }
        if c == '\'' {
            let text = self.quoted()?;
            return Ok(Some(make(TokenKind::Name, text, true)));
        }
        if matches!(c, '(' | ')' | '[' | ']' | '{' | '}' | ',' | '|') {
            self.bump();
            return Ok(Some(make(TokenKind::Punct, c.to_string(), false)));
        }
        if c == '!' || c == ';' {
            self.bump();
            return Ok(Some(make(TokenKind::Name, c.to_string(), false)));
        }
        if is_symbol_char(c) {
            let text = self.take_while(is_symbol_char);
            if text == "." {
                match self.peek() {
                    None | Some('%') => return Ok(Some(make(TokenKind::End, text, false))),
                    Some(n) if n.is_whitespace() => {
                        return Ok(Some(make(TokenKind::End, text, false)))
                    }
                    _ => {}
                }
            }
            return Ok(Some(make(TokenKind::Name, text, false)));
        }
        Err(self.error(format!("illegal character {:?}", c)))
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }

    fn number(&mut self) -> Result<(TokenKind, String), SyntaxError> {
        let (line, column) = (self.line, self.column);
        let mut text = self.take_while(|c| c.is_ascii_digit());
        let mut is_float = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            is_float = true;
            text.push('.');
            self.bump();
            text.push_str(&self.take_while(|c| c.is_ascii_digit()));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let sign = matches!(self.peek_at(1), Some('+' | '-'));
            let digit_at = if sign { 2 } else { 1 };
            if self.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                is_float = true;
                text.push('e');
                self.bump();
                if sign {
                    text.push(self.bump().expect("sign char"));
                }
                text.push_str(&self.take_while(|c| c.is_ascii_digit()));
            }
        }
        if is_float {
            let value: f64 = text
                .parse()
                .map_err(|_| SyntaxError::new("malformed float", line, column))?;
            Ok((TokenKind::Float(value), text))
        } else {
            let value: i64 = text
                .parse()
                .map_err(|_| SyntaxError::new("integer literal out of range", line, column))?;
            Ok((TokenKind::Integer(value), text))
        }
    }

    fn quoted(&mut self) -> Result<String, SyntaxError> {
        let (line, column) = (self.line, self.column);
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(SyntaxError::new("unterminated quoted atom", line, column)),
                Some('\'') => {
                    if self.peek() == Some('\'') {
                        self.bump();
                        out.push('\'');
                    } else {
                        return Ok(out);
                    }
                }
                Some('\\') => match self.bump() {
                    Some('n') => out.push('\n'),
                    Some('t') => out.push('\t'),
                    Some('\\') => out.push('\\'),
                    Some('\'') => out.push('\''),
                    Some('\n') => {}
                    Some(other) => {
                        return Err(SyntaxError::new(
                            format!("unknown escape \\{}", other),
                            self.line,
                            self.column,
                        ))
                    }
                    None => return Err(SyntaxError::new("unterminated quoted atom", line, column)),
                },
                Some(c) => out.push(c),
            }
        }
    }
}

/// Splits source text into tokens. `%` starts a line comment and a lone `.`
/// followed by layout or end of input is the clause terminator.
pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut lexer = Lexer::new(text);
    let mut out = Vec::new();
    while let Some(tok) = lexer.next_token()? {
        out.push(tok);
    }
    Ok(out)
}
