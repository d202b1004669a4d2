//! Source locations and parse diagnostics for the text formats.

use std::fmt;
use thiserror::Error;

/// A 1-based, non-empty location inside a source file. `col_end` is the
/// column one past the last character of the span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl SourceSpan {
    pub fn new(file: impl Into<String>, line: usize, col_start: usize, col_end: usize) -> Self {
        debug_assert!(line >= 1 && col_start >= 1 && col_end > col_start);
        SourceSpan {
            file: file.into(),
            line,
            col_start,
            col_end,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.col_start)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseErrorKind {
    #[error("expected `{expected}`")]
    Expected { expected: String },
    #[error("unexpected token `{token}`")]
    Unexpected { token: String },
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("unknown variable or literal `{0}`")]
    UnknownLiteral(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate declaration of `{0}`")]
    Duplicate(String),
    #[error("degree `{0}` is not a number in [0, 1]")]
    DegreeOutOfRange(String),
    #[error("triangle `{0}` must be three ordered degrees l/p/u")]
    BadTriangle(String),
    #[error("duplicate cell for `{0}`")]
    DuplicateCell(String),
    #[error("clause is a tautology")]
    TautologicalClause,
    #[error("clause must mention the node variable exactly once")]
    ClauseMissingNode,
    #[error("literal `{literal}` does not belong to node `{node}` or its parents")]
    LiteralOutsideKb { literal: String, node: String },
    #[error("parent list for `{node}` must assign each declared parent exactly once")]
    BadParentList { node: String },
    #[error("`{0}` is a reserved word")]
    ReservedWord(String),
    #[error("{0}")]
    Other(String),
}

/// A diagnostic pointing inside the offending token.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(span: SourceSpan, kind: ParseErrorKind) -> Self {
        ParseError { span, kind }
    }
}

/// One whitespace-delimited token with its location.
#[derive(Debug, Clone)]
pub struct Token<'a> {
    pub text: &'a str,
    pub span: SourceSpan,
}

/// Splits a line into tokens, dropping everything from a `#` on.
pub fn tokenize<'a>(file: &str, line_no: usize, line: &'a str) -> Vec<Token<'a>> {
    let mut tokens = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut end = start;
        while let Some(&(i, c)) = chars.peek() {
            if c.is_whitespace() || c == '#' {
                break;
            }
            end = i + c.len_utf8();
            chars.next();
        }
        tokens.push(Token {
            text: &line[start..end],
            span: SourceSpan::new(file, line_no, start + 1, end + 1),
        });
    }
    tokens
}
