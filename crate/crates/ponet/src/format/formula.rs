//! Parser for query expressions: literals combined with `!`, `&`, `|` and
//! parentheses, e.g. `!a & (b | c)`. `!` binds tightest, then `&`, then
//! `|`.

use crate::logic::{Formula, Scope};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("column {column}: {message}")]
pub struct FormulaError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Open,
    Close,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let column = i + 1;
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '!' => {
                tokens.push((Tok::Not, column));
                chars.next();
            }
            '&' => {
                tokens.push((Tok::And, column));
                chars.next();
            }
            '|' => {
                tokens.push((Tok::Or, column));
                chars.next();
            }
            '(' => {
                tokens.push((Tok::Open, column));
                chars.next();
            }
            ')' => {
                tokens.push((Tok::Close, column));
                chars.next();
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut ident = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        ident.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push((Tok::Ident(ident), column));
            }
            other => {
                return Err(FormulaError {
                    column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(tokens)
}

struct ExprParser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    scope: &'a Scope,
    len: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.len + 1, |(_, c)| *c)
    }

    fn fail(&self, message: impl Into<String>) -> FormulaError {
        FormulaError {
            column: self.here(),
            message: message.into(),
        }
    }

    fn or_expr(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.and_expr()?;
        while matches!(self.peek(), Some((Tok::Or, _))) {
            self.pos += 1;
            acc = acc.or(self.and_expr()?);
        }
        Ok(acc)
    }

    fn and_expr(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.unary()?;
        while matches!(self.peek(), Some((Tok::And, _))) {
            self.pos += 1;
            acc = acc.and(self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        if matches!(self.peek(), Some((Tok::Not, _))) {
            self.pos += 1;
            return Ok(self.unary()?.not());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().cloned() {
            Some((Tok::Open, _)) => {
                self.pos += 1;
                let inner = self.or_expr()?;
                if !matches!(self.peek(), Some((Tok::Close, _))) {
                    return Err(self.fail("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some((Tok::Ident(name), column)) => {
                self.pos += 1;
                match self.scope.literal_by_label(&name) {
                    Some(lit) => Ok(Formula::Lit(lit)),
                    None => Err(FormulaError {
                        column,
                        message: format!("unknown literal `{name}`"),
                    }),
                }
            }
            _ => Err(self.fail("expected a literal or `(`")),
        }
    }
}

/// Parses a query expression against a scope's literal labels.
pub fn parse_formula(text: &str, scope: &Scope) -> Result<Formula, FormulaError> {
    let tokens = lex(text)?;
    if tokens.is_empty() {
        return Err(FormulaError {
            column: 1,
            message: "empty expression".into(),
        });
    }
    let mut parser = ExprParser {
        tokens,
        pos: 0,
        scope,
        len: text.len(),
    };
    let formula = parser.or_expr()?;
    if let Some((tok, column)) = parser.peek() {
        return Err(FormulaError {
            column: *column,
            message: format!("unexpected trailing `{tok:?}`"),
        });
    }
    Ok(formula)
}
