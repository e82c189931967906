use std::fmt;

/// A syntax error with its 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl SyntaxError {
    pub fn new(message: impl Into<String>, line: usize, column: usize) -> SyntaxError {
        SyntaxError {
            message: message.into(),
            line,
            column,
        }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at line {}, column {}", self.message, self.line, self.column)
    }
}

impl std::error::Error for SyntaxError {}

/// Runtime and consultation errors. The display form is `<kind>: <detail>`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PrologError {
    #[error("instantiation_error: {0}")]
    Instantiation(String),
    #[error("type_error: expected {expected}, found {culprit}")]
    Type {
        expected: &'static str,
        culprit: String,
    },
    #[error("evaluation_error: {0}")]
    Evaluation(String),
    #[error("existence_error: unknown procedure {0}")]
    Existence(String),
    #[error("permission_error: {0}")]
    Permission(String),
    #[error("domain_error: {0}")]
    Domain(String),
    #[error("syntax_error: {0}")]
    Syntax(SyntaxError),
    #[error("resource_error: {0}")]
    Resource(String),
    #[error("cyclic_term: {0}")]
    CyclicTerm(String),
}

impl PrologError {
    pub fn kind(&self) -> &'static str {
        match self {
            PrologError::Instantiation(_) => "instantiation_error",
            PrologError::Type { .. } => "type_error",
            PrologError::Evaluation(_) => "evaluation_error",
            PrologError::Existence(_) => "existence_error",
            PrologError::Permission(_) => "permission_error",
            PrologError::Domain(_) => "domain_error",
            PrologError::Syntax(_) => "syntax_error",
            PrologError::Resource(_) => "resource_error",
            PrologError::CyclicTerm(_) => "cyclic_term",
        }
    }
}

impl From<SyntaxError> for PrologError {
    fn from(e: SyntaxError) -> Self {
        PrologError::Syntax(e)
    }
}
