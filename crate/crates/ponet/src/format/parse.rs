//! Parsers for the three file dialects. Errors are collected per line so a
//! single run reports everything it can.

use super::span::{tokenize, ParseError, ParseErrorKind, SourceSpan, Token};
use super::{DeclRef, Document, DocumentPayload};
use crate::fuzzy::{FuzzyCell, FuzzyNetwork, FuzzyNode, TriangularDegree};
use crate::kb::{AverageKb, WeightedFormula};
use crate::logic::{Clause, Literal, LogicError, Scope, Variable};
use crate::measure::Degree;
use crate::network::{ConditionalCell, NetworkNode, ParentInstantiation, PossibilisticNetwork};
use crate::transform::{LocalKb, LocalKbSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dialect {
    Network,
    KbSet,
    Fuzzy,
}

impl Dialect {
    fn header(self) -> &'static str {
        match self {
            Dialect::Network => "network",
            Dialect::KbSet => "kbset",
            Dialect::Fuzzy => "fuzzy",
        }
    }
}

/// Degrees for one parsed cell; the triangle is degenerate outside the
/// fuzzy dialect.
struct ParsedCell {
    value: bool,
    parents: ParentInstantiation,
    pi: Degree,
    n: TriangularDegree,
    mu: Option<String>,
}

struct ParsedKb {
    name: String,
    var: usize,
    formulas: Vec<(Clause, Degree, Degree)>,
}

struct Parser<'a> {
    file: &'a str,
    dialect: Dialect,
    errors: Vec<ParseError>,
    decls: Vec<(DeclRef, SourceSpan)>,
    doc_name: Option<String>,
    vars: Vec<Variable>,
    parents: Vec<Option<Vec<usize>>>, // per var, in declaration order
    cells: Vec<Vec<ParsedCell>>,      // per var
    kbs: Vec<ParsedKb>,
    current_kb: Option<usize>,
    last_line: usize,
}

impl<'a> Parser<'a> {
    fn new(file: &'a str, dialect: Dialect) -> Self {
        Parser {
            file,
            dialect,
            errors: Vec::new(),
            decls: Vec::new(),
            doc_name: None,
            vars: Vec::new(),
            parents: Vec::new(),
            cells: Vec::new(),
            kbs: Vec::new(),
            current_kb: None,
            last_line: 1,
        }
    }

    fn error(&mut self, span: SourceSpan, kind: ParseErrorKind) {
        self.errors.push(ParseError::new(span, kind));
    }

    fn eof_span(&self) -> SourceSpan {
        SourceSpan::new(self.file, self.last_line, 1, 2)
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name() == name)
    }

    fn literal(&self, label: &str) -> Option<Literal> {
        for (i, v) in self.vars.iter().enumerate() {
            if v.label(true) == label {
                return Some(Literal::new(i, true));
            }
            if v.label(false) == label {
                return Some(Literal::new(i, false));
            }
        }
        None
    }

    fn run(&mut self, text: &'a str) {
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            self.last_line = line_no;
            let tokens = tokenize(self.file, line_no, line);
            if tokens.is_empty() {
                continue;
            }
            self.line(&tokens);
        }
        if self.doc_name.is_none() {
            self.error(
                self.eof_span(),
                ParseErrorKind::Expected {
                    expected: format!("{} NAME header", self.dialect.header()),
                },
            );
        }
        if self.vars.is_empty() {
            self.error(
                self.eof_span(),
                ParseErrorKind::Expected {
                    expected: "at least one var declaration".into(),
                },
            );
        }
    }

    fn line(&mut self, tokens: &[Token<'a>]) {
        let head = &tokens[0];
        match head.text {
            t if t == self.dialect.header() => self.header_line(tokens),
            "network" | "kbset" | "fuzzy" => self.error(
                head.span.clone(),
                ParseErrorKind::Expected {
                    expected: format!("{} header for this file kind", self.dialect.header()),
                },
            ),
            "var" => self.var_line(tokens),
            "parents" => self.parents_line(tokens),
            "cell" if self.dialect != Dialect::KbSet => self.cell_line(tokens),
            "kb" if self.dialect == Dialect::KbSet => self.kb_line(tokens),
            "clause" if self.dialect == Dialect::KbSet => self.clause_line(tokens),
            other => self.error(
                head.span.clone(),
                ParseErrorKind::UnknownDirective(other.to_string()),
            ),
        }
    }

    fn single_arg(&mut self, tokens: &[Token<'a>], what: &str) -> Option<String> {
        if tokens.len() != 2 {
            let span = tokens
                .get(2)
                .map(|t| t.span.clone())
                .unwrap_or_else(|| tokens[0].span.clone());
            self.error(
                span,
                ParseErrorKind::Expected {
                    expected: what.to_string(),
                },
            );
            return None;
        }
        Some(tokens[1].text.to_string())
    }

    fn header_line(&mut self, tokens: &[Token<'a>]) {
        let Some(name) = self.single_arg(tokens, "exactly one document name") else {
            return;
        };
        if self.doc_name.is_some() {
            self.error(
                tokens[0].span.clone(),
                ParseErrorKind::Duplicate(self.dialect.header().to_string()),
            );
            return;
        }
        self.doc_name = Some(name);
        self.decls.push((DeclRef::Header, tokens[0].span.clone()));
    }

    fn var_line(&mut self, tokens: &[Token<'a>]) {
        let Some(name) = self.single_arg(tokens, "exactly one variable name") else {
            return;
        };
        let span = tokens[1].span.clone();
        if name.to_lowercase() == "else" {
            self.error(span, ParseErrorKind::ReservedWord(name));
            return;
        }
        let var = match Variable::new(&name) {
            Ok(v) => v,
            Err(_) => {
                self.error(span, ParseErrorKind::Unexpected { token: name });
                return;
            }
        };
        let clash = self.vars.iter().any(|v| {
            v.name() == var.name()
                || v.label(true) == var.label(true)
                || v.label(false) == var.label(false)
        });
        if clash {
            self.error(span, ParseErrorKind::Duplicate(name));
            return;
        }
        self.decls.push((DeclRef::Var(name), span));
        self.vars.push(var);
        self.parents.push(None);
        self.cells.push(Vec::new());
    }

    /// Reads a `NODE:` token, returning the variable index.
    fn node_token(&mut self, token: &Token<'a>) -> Option<usize> {
        let Some(name) = token.text.strip_suffix(':') else {
            self.error(
                token.span.clone(),
                ParseErrorKind::Expected {
                    expected: "node name followed by `:`".into(),
                },
            );
            return None;
        };
        match self.var_index(name) {
            Some(i) => Some(i),
            None => {
                self.error(
                    token.span.clone(),
                    ParseErrorKind::UnknownNode(name.to_string()),
                );
                None
            }
        }
    }

    fn parents_line(&mut self, tokens: &[Token<'a>]) {
        if tokens.len() < 3 {
            self.error(
                tokens[0].span.clone(),
                ParseErrorKind::Expected {
                    expected: "parents NODE: PARENT [PARENT ...]".into(),
                },
            );
            return;
        }
        let Some(node) = self.node_token(&tokens[1]) else {
            return;
        };
        if self.parents[node].is_some() {
            self.error(
                tokens[1].span.clone(),
                ParseErrorKind::Duplicate(format!("parents of {}", self.vars[node].name())),
            );
            return;
        }
        if !self.cells[node].is_empty() || self.kbs.iter().any(|k| k.var == node) {
            self.error(
                tokens[1].span.clone(),
                ParseErrorKind::Other(format!(
                    "parents of `{}` must be declared before its cells or kb",
                    self.vars[node].name()
                )),
            );
            return;
        }
        let mut parent_indices = Vec::new();
        for token in &tokens[2..] {
            match self.var_index(token.text) {
                Some(p) if p == node || parent_indices.contains(&p) => {
                    self.error(
                        token.span.clone(),
                        ParseErrorKind::BadParentList {
                            node: self.vars[node].name().to_string(),
                        },
                    );
                    return;
                }
                Some(p) => parent_indices.push(p),
                None => {
                    self.error(
                        token.span.clone(),
                        ParseErrorKind::UnknownLiteral(token.text.to_string()),
                    );
                    return;
                }
            }
        }
        self.decls.push((
            DeclRef::Parents(self.vars[node].name().to_string()),
            tokens[1].span.clone(),
        ));
        self.parents[node] = Some(parent_indices);
    }

    fn degree_token(&mut self, token: &Token<'a>, key: &str) -> Option<f64> {
        let Some(raw) = token.text.strip_prefix(&format!("{key}=")) else {
            self.error(
                token.span.clone(),
                ParseErrorKind::Expected {
                    expected: format!("{key}=NUMBER"),
                },
            );
            return None;
        };
        match raw.parse::<f64>() {
            Ok(v) if (0.0..=1.0).contains(&v) => Some(v),
            _ => {
                self.error(
                    token.span.clone(),
                    ParseErrorKind::DegreeOutOfRange(raw.to_string()),
                );
                None
            }
        }
    }

    /// `n=NUMBER` or, in the fuzzy dialect, `n=l/p/u`.
    fn necessity_token(&mut self, token: &Token<'a>) -> Option<TriangularDegree> {
        let Some(raw) = token.text.strip_prefix("n=") else {
            self.error(
                token.span.clone(),
                ParseErrorKind::Expected {
                    expected: "n=NUMBER".into(),
                },
            );
            return None;
        };
        if raw.contains('/') {
            if self.dialect != Dialect::Fuzzy {
                self.error(
                    token.span.clone(),
                    ParseErrorKind::Unexpected {
                        token: token.text.to_string(),
                    },
                );
                return None;
            }
            let parts: Vec<&str> = raw.split('/').collect();
            let values: Option<Vec<f64>> = if parts.len() == 3 {
                parts.iter().map(|p| p.parse::<f64>().ok()).collect()
            } else {
                None
            };
            let triangle = values
                .and_then(|v| TriangularDegree::from_values(v[0], v[1], v[2]).ok());
            match triangle {
                Some(t) => Some(t),
                None => {
                    self.error(
                        token.span.clone(),
                        ParseErrorKind::BadTriangle(raw.to_string()),
                    );
                    None
                }
            }
        } else {
            match raw.parse::<f64>().ok().and_then(|v| Degree::new(v).ok()) {
                Some(d) => Some(TriangularDegree::crisp(d)),
                None => {
                    self.error(
                        token.span.clone(),
                        ParseErrorKind::DegreeOutOfRange(raw.to_string()),
                    );
                    None
                }
            }
        }
    }

    fn cell_line(&mut self, tokens: &[Token<'a>]) {
        if tokens.len() < 3 {
            self.error(
                tokens[0].span.clone(),
                ParseErrorKind::Expected {
                    expected: "cell NODE: VALUE [| PARENTS] pi=N n=N".into(),
                },
            );
            return;
        }
        let Some(node) = self.node_token(&tokens[1]) else {
            return;
        };
        let value_token = &tokens[2];
        let value = match self.literal(value_token.text) {
            Some(lit) if lit.var() == node => lit.positive(),
            Some(_) => {
                self.error(
                    value_token.span.clone(),
                    ParseErrorKind::Other(format!(
                        "literal `{}` is not a value of node `{}`",
                        value_token.text,
                        self.vars[node].name()
                    )),
                );
                return;
            }
            None => {
                self.error(
                    value_token.span.clone(),
                    ParseErrorKind::UnknownLiteral(value_token.text.to_string()),
                );
                return;
            }
        };
        let mut rest = &tokens[3..];
        let declared = self.parents[node].clone().unwrap_or_default();
        let parents = if rest.first().map(|t| t.text) == Some("|") {
            let bar = &rest[0];
            rest = &rest[1..];
            if rest.first().map(|t| t.text) == Some("else") {
                rest = &rest[1..];
                ParentInstantiation::Else
            } else {
                let mut assignment: Vec<Option<bool>> = vec![None; declared.len()];
                let mut consumed = 0;
                while let Some(token) = rest.first() {
                    if token.text.starts_with("pi=") {
                        break;
                    }
                    let Some(lit) = self.literal(token.text) else {
                        self.error(
                            token.span.clone(),
                            ParseErrorKind::UnknownLiteral(token.text.to_string()),
                        );
                        return;
                    };
                    let Some(pos) = declared.iter().position(|&p| p == lit.var()) else {
                        self.error(
                            token.span.clone(),
                            ParseErrorKind::BadParentList {
                                node: self.vars[node].name().to_string(),
                            },
                        );
                        return;
                    };
                    if assignment[pos].is_some() {
                        self.error(
                            token.span.clone(),
                            ParseErrorKind::BadParentList {
                                node: self.vars[node].name().to_string(),
                            },
                        );
                        return;
                    }
                    assignment[pos] = Some(lit.positive());
                    consumed += 1;
                    rest = &rest[1..];
                }
                if consumed != declared.len() {
                    self.error(
                        bar.span.clone(),
                        ParseErrorKind::BadParentList {
                            node: self.vars[node].name().to_string(),
                        },
                    );
                    return;
                }
                ParentInstantiation::Explicit(assignment.into_iter().flatten().collect())
            }
        } else {
            if !declared.is_empty() {
                self.error(
                    value_token.span.clone(),
                    ParseErrorKind::BadParentList {
                        node: self.vars[node].name().to_string(),
                    },
                );
                return;
            }
            ParentInstantiation::Explicit(Vec::new())
        };
        let Some(pi_token) = rest.first() else {
            self.error(
                tokens[0].span.clone(),
                ParseErrorKind::Expected {
                    expected: "pi=NUMBER".into(),
                },
            );
            return;
        };
        let Some(pi) = self.degree_token(pi_token, "pi") else {
            return;
        };
        let Some(n_token) = rest.get(1) else {
            self.error(
                pi_token.span.clone(),
                ParseErrorKind::Expected {
                    expected: "n=NUMBER".into(),
                },
            );
            return;
        };
        let Some(n) = self.necessity_token(n_token) else {
            return;
        };
        let mut mu = None;
        let mut extra = &rest[2..];
        if self.dialect == Dialect::Fuzzy {
            if let Some(token) = extra.first() {
                if let Some(label) = token.text.strip_prefix("mu=") {
                    mu = Some(label.to_string());
                    extra = &extra[1..];
                }
            }
        }
        if let Some(token) = extra.first() {
            self.error(
                token.span.clone(),
                ParseErrorKind::Unexpected {
                    token: token.text.to_string(),
                },
            );
            return;
        }
        let duplicate = self.cells[node]
            .iter()
            .any(|c| c.value == value && c.parents == parents);
        if duplicate {
            let desc = match &parents {
                ParentInstantiation::Else => format!("{} | else", value_token.text),
                ParentInstantiation::Explicit(vs) if vs.is_empty() => {
                    value_token.text.to_string()
                }
                ParentInstantiation::Explicit(vs) => {
                    let labels: Vec<&str> = vs
                        .iter()
                        .zip(&declared)
                        .map(|(&v, &p)| self.vars[p].label(v))
                        .collect();
                    format!("{} | {}", value_token.text, labels.join(" "))
                }
            };
            self.error(tokens[2].span.clone(), ParseErrorKind::DuplicateCell(desc));
            return;
        }
        self.decls.push((
            DeclRef::Cell {
                node: self.vars[node].name().to_string(),
                ordinal: self.cells[node].len(),
            },
            tokens[0].span.clone(),
        ));
        self.cells[node].push(ParsedCell {
            value,
            parents,
            pi: Degree::new(pi).unwrap(),
            n,
            mu,
        });
    }

    fn kb_line(&mut self, tokens: &[Token<'a>]) {
        if tokens.len() != 4 || tokens[2].text != "for" {
            self.error(
                tokens[0].span.clone(),
                ParseErrorKind::Expected {
                    expected: "kb NAME for NODE".into(),
                },
            );
            return;
        }
        let name = tokens[1].text.to_string();
        let Some(var) = self.var_index(tokens[3].text) else {
            self.error(
                tokens[3].span.clone(),
                ParseErrorKind::UnknownNode(tokens[3].text.to_string()),
            );
            return;
        };
        if self.kbs.iter().any(|k| k.name == name) {
            self.error(tokens[1].span.clone(), ParseErrorKind::Duplicate(name));
            return;
        }
        if self.kbs.iter().any(|k| k.var == var) {
            self.error(
                tokens[3].span.clone(),
                ParseErrorKind::Duplicate(format!("kb for {}", self.vars[var].name())),
            );
            return;
        }
        self.decls
            .push((DeclRef::Kb(name.clone()), tokens[1].span.clone()));
        self.kbs.push(ParsedKb {
            name,
            var,
            formulas: Vec::new(),
        });
        self.current_kb = Some(self.kbs.len() - 1);
    }

    fn clause_line(&mut self, tokens: &[Token<'a>]) {
        let Some(kb_index) = self.current_kb else {
            self.error(
                tokens[0].span.clone(),
                ParseErrorKind::Expected {
                    expected: "a kb header before clause lines".into(),
                },
            );
            return;
        };
        let node = self.kbs[kb_index].var;
        let locals = {
            let mut l = vec![node];
            l.extend(self.parents[node].clone().unwrap_or_default());
            l
        };
        // literals up to the alpha= token, separated by `|`
        let mut literals = Vec::new();
        let mut rest = &tokens[1..];
        let mut expect_literal = true;
        while let Some(token) = rest.first() {
            if token.text.starts_with("alpha=") {
                break;
            }
            if expect_literal {
                let Some(lit) = self.literal(token.text) else {
                    self.error(
                        token.span.clone(),
                        ParseErrorKind::UnknownLiteral(token.text.to_string()),
                    );
                    return;
                };
                let Some(local) = locals.iter().position(|&v| v == lit.var()) else {
                    self.error(
                        token.span.clone(),
                        ParseErrorKind::LiteralOutsideKb {
                            literal: token.text.to_string(),
                            node: self.vars[node].name().to_string(),
                        },
                    );
                    return;
                };
                literals.push(Literal::new(local, lit.positive()));
            } else if token.text != "|" {
                self.error(
                    token.span.clone(),
                    ParseErrorKind::Expected {
                        expected: "`|` between literals".into(),
                    },
                );
                return;
            }
            expect_literal = !expect_literal;
            rest = &rest[1..];
        }
        if literals.is_empty() {
            self.error(
                tokens[0].span.clone(),
                ParseErrorKind::Expected {
                    expected: "at least one literal".into(),
                },
            );
            return;
        }
        let clause = match Clause::new(literals) {
            Ok(c) => c,
            Err(LogicError::TautologicalClause) => {
                self.error(tokens[1].span.clone(), ParseErrorKind::TautologicalClause);
                return;
            }
            Err(e) => {
                self.error(tokens[1].span.clone(), ParseErrorKind::Other(e.to_string()));
                return;
            }
        };
        if clause.literals().iter().filter(|l| l.var() == 0).count() != 1 {
            self.error(tokens[1].span.clone(), ParseErrorKind::ClauseMissingNode);
            return;
        }
        let (Some(alpha_token), Some(beta_token)) = (rest.first(), rest.get(1)) else {
            self.error(
                tokens[0].span.clone(),
                ParseErrorKind::Expected {
                    expected: "alpha=NUMBER beta=NUMBER".into(),
                },
            );
            return;
        };
        let Some(alpha) = self.degree_token(alpha_token, "alpha") else {
            return;
        };
        if alpha == 0.0 {
            self.error(
                alpha_token.span.clone(),
                ParseErrorKind::Other("alpha must be greater than 0".into()),
            );
            return;
        }
        let Some(beta) = self.degree_token(beta_token, "beta") else {
            return;
        };
        if let Some(token) = rest.get(2) {
            self.error(
                token.span.clone(),
                ParseErrorKind::Unexpected {
                    token: token.text.to_string(),
                },
            );
            return;
        }
        let kb = &mut self.kbs[kb_index];
        self.decls.push((
            DeclRef::Clause {
                kb: kb.name.clone(),
                ordinal: kb.formulas.len(),
            },
            tokens[0].span.clone(),
        ));
        kb.formulas.push((
            clause,
            Degree::new(alpha).unwrap(),
            Degree::new(beta).unwrap(),
        ));
    }

    fn finish_scope(&mut self) -> Option<Scope> {
        match Scope::new(self.vars.clone()) {
            Ok(scope) => Some(scope),
            Err(e) => {
                self.error(self.eof_span(), ParseErrorKind::Other(e.to_string()));
                None
            }
        }
    }

    fn local_scope(&self, scope: &Scope, var: usize) -> Scope {
        let mut vars = vec![scope.var(var).unwrap().clone()];
        for &p in self.parents[var].as_deref().unwrap_or_default() {
            vars.push(scope.var(p).unwrap().clone());
        }
        Scope::new(vars).unwrap()
    }

    fn finish_network(mut self) -> Result<Document, Vec<ParseError>> {
        let name = self.doc_name.clone().unwrap_or_default();
        let Some(scope) = self.finish_scope() else {
            return Err(self.errors);
        };
        if !self.errors.is_empty() {
            return Err(self.errors);
        }
        let mut nodes = Vec::with_capacity(self.vars.len());
        for (i, cells) in self.cells.iter().enumerate() {
            let cells = cells
                .iter()
                .map(|c| ConditionalCell::new(c.value, c.parents.clone(), c.pi, c.n.peak()))
                .collect();
            nodes.push(NetworkNode::new(
                i,
                self.parents[i].clone().unwrap_or_default(),
                cells,
            ));
        }
        Ok(Document {
            payload: DocumentPayload::Network(PossibilisticNetwork::new(name, scope, nodes)),
            decls: self.decls,
        })
    }

    fn finish_fuzzy(mut self) -> Result<Document, Vec<ParseError>> {
        let name = self.doc_name.clone().unwrap_or_default();
        let Some(scope) = self.finish_scope() else {
            return Err(self.errors);
        };
        if !self.errors.is_empty() {
            return Err(self.errors);
        }
        let mut nodes = Vec::with_capacity(self.vars.len());
        for (i, cells) in self.cells.iter().enumerate() {
            let cells = cells
                .iter()
                .map(|c| FuzzyCell {
                    value: c.value,
                    parents: c.parents.clone(),
                    pi: c.pi,
                    n: c.n,
                    mu: c.mu.clone(),
                })
                .collect();
            nodes.push(FuzzyNode {
                var: i,
                parents: self.parents[i].clone().unwrap_or_default(),
                cells,
            });
        }
        Ok(Document {
            payload: DocumentPayload::Fuzzy(FuzzyNetwork::new(name, scope, nodes)),
            decls: self.decls,
        })
    }

    fn finish_kb_set(mut self) -> Result<Document, Vec<ParseError>> {
        let name = self.doc_name.clone().unwrap_or_default();
        let Some(scope) = self.finish_scope() else {
            return Err(self.errors);
        };
        if !self.errors.is_empty() {
            return Err(self.errors);
        }
        let mut kbs = Vec::with_capacity(self.vars.len());
        for (i, var) in self.vars.iter().enumerate() {
            let local_scope = self.local_scope(&scope, i);
            let parsed = self.kbs.iter().find(|k| k.var == i);
            let mut kb = AverageKb::new(local_scope);
            if let Some(parsed) = parsed {
                for (clause, alpha, beta) in &parsed.formulas {
                    // weight checks already done; duplicate clauses merge
                    kb.insert(WeightedFormula::new(clause.clone(), *alpha, *beta).unwrap())
                        .unwrap();
                }
            }
            kbs.push(LocalKb {
                name: parsed.map_or_else(|| format!("S{}", var.name()), |p| p.name.clone()),
                var: i,
                parents: self.parents[i].clone().unwrap_or_default(),
                kb,
            });
        }
        Ok(Document {
            payload: DocumentPayload::KbSet(LocalKbSet { name, scope, kbs }),
            decls: self.decls,
        })
    }
}

/// Parses network text (`.pnet`).
pub fn parse_network(text: &str, file: &str) -> Result<Document, Vec<ParseError>> {
    let mut parser = Parser::new(file, Dialect::Network);
    parser.run(text);
    parser.finish_network()
}

/// Parses a knowledge-base set (`.pkb`).
pub fn parse_kb_set(text: &str, file: &str) -> Result<Document, Vec<ParseError>> {
    let mut parser = Parser::new(file, Dialect::KbSet);
    parser.run(text);
    parser.finish_kb_set()
}

/// Parses a fuzzy network (`.pfnet`).
pub fn parse_fuzzy(text: &str, file: &str) -> Result<Document, Vec<ParseError>> {
    let mut parser = Parser::new(file, Dialect::Fuzzy);
    parser.run(text);
    parser.finish_fuzzy()
}
