//! Propositional substrate: binary variables, literals, clauses, formulas,
//! worlds, and exhaustive world enumeration.
//!
//! Everything here is definitional. Semantics are computed by enumerating
//! interpretations, which is why [`ENUMERATION_LIMIT`] caps the number of
//! variables a scope may hold before exhaustive operations refuse to run.

use std::fmt;
use thiserror::Error;

/// Default cap on exhaustive world enumeration (2^20 worlds).
pub const ENUMERATION_LIMIT: usize = 20;

/// Index of a variable within its [`Scope`].
pub type VarIndex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable index {index} out of range for scope of {len}")]
    VariableOutOfRange { index: usize, len: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("duplicate literal label `{0}`")]
    DuplicateLabel(String),
    #[error("variable `{name}` has indistinct literal labels")]
    IndistinctLabels { name: String },
    #[error("scope must declare at least one variable")]
    EmptyScope,
    #[error("clause must contain at least one literal")]
    EmptyClause,
    #[error("clause contains a variable with both polarities and is a tautology")]
    TautologicalClause,
    #[error("{count} variables exceed the exhaustive enumeration limit of {limit}")]
    TooManyVariables { count: usize, limit: usize },
    #[error("world assigns {world} variables but the scope declares {scope}")]
    WorldSizeMismatch { world: usize, scope: usize },
}

/// A binary variable with a label for each truth value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    name: String,
    positive: String,
    negative: String,
}

impl Variable {
    /// Builds a variable whose labels are derived from the name: the
    /// lowercased name for the positive literal, `!` + lowercased name for
    /// the negative one.
    pub fn new(name: impl Into<String>) -> Result<Self, LogicError> {
        let name = name.into();
        let positive = name.to_lowercase();
        let negative = format!("!{positive}");
        Self::with_labels(name, positive, negative)
    }

    pub fn with_labels(
        name: impl Into<String>,
        positive: impl Into<String>,
        negative: impl Into<String>,
    ) -> Result<Self, LogicError> {
        let name = name.into();
        let positive = positive.into();
        let negative = negative.into();
        if name.is_empty() || positive.is_empty() || negative.is_empty() || positive == negative {
            return Err(LogicError::IndistinctLabels { name });
        }
        Ok(Variable {
            name,
            positive,
            negative,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn label(&self, value: bool) -> &str {
        if value {
            &self.positive
        } else {
            &self.negative
        }
    }
}

/// An ordered set of distinct variables. All worlds, distributions and
/// tables are indexed positionally against a scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scope {
    vars: Vec<Variable>,
}

impl Scope {
    pub fn new(vars: Vec<Variable>) -> Result<Self, LogicError> {
        if vars.is_empty() {
            return Err(LogicError::EmptyScope);
        }
        for (i, v) in vars.iter().enumerate() {
            for w in &vars[..i] {
                if v.name == w.name {
                    return Err(LogicError::DuplicateVariable(v.name.clone()));
                }
                for label in [&v.positive, &v.negative] {
                    if *label == w.positive || *label == w.negative {
                        return Err(LogicError::DuplicateLabel(label.clone()));
                    }
                }
            }
        }
        Ok(Scope { vars })
    }

    /// Convenience constructor from plain names.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self, LogicError> {
        let vars = names
            .iter()
            .map(|n| Variable::new(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Scope::new(vars)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var(&self, index: VarIndex) -> Option<&Variable> {
        self.vars.get(index)
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<VarIndex> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Resolves a literal label (`a` or `!a`) to a literal.
    pub fn literal_by_label(&self, label: &str) -> Option<Literal> {
        for (i, v) in self.vars.iter().enumerate() {
            if v.positive == label {
                return Some(Literal::new(i, true));
            }
            if v.negative == label {
                return Some(Literal::new(i, false));
            }
        }
        None
    }

    /// Number of worlds over this scope, checked against `limit`.
    pub fn world_count(&self, limit: usize) -> Result<usize, LogicError> {
        if self.len() > limit {
            return Err(LogicError::TooManyVariables {
                count: self.len(),
                limit,
            });
        }
        Ok(1usize << self.len())
    }
}

/// A variable paired with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Literal {
    var: VarIndex,
    // field order matters for derived Ord: positive literals sort first
    negated: bool,
}

impl Literal {
    pub fn new(var: VarIndex, positive: bool) -> Self {
        Literal {
            var,
            negated: !positive,
        }
    }

    pub fn var(&self) -> VarIndex {
        self.var
    }

    pub fn positive(&self) -> bool {
        !self.negated
    }

    pub fn negate(&self) -> Literal {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    pub fn label<'a>(&self, scope: &'a Scope) -> Option<&'a str> {
        scope.var(self.var).map(|v| v.label(self.positive()))
    }

    fn eval(&self, world: &World) -> Result<bool, LogicError> {
        world
            .value(self.var)
            .map(|v| v == self.positive())
            .ok_or(LogicError::VariableOutOfRange {
                index: self.var,
                len: world.len(),
            })
    }
}

/// A non-empty disjunction of literals over distinct variables.
///
/// Construction canonicalizes: literals are sorted by variable index,
/// duplicates collapse, and a clause mentioning a variable with both
/// polarities is rejected rather than silently kept as a tautology.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self, LogicError> {
        let mut lits: Vec<Literal> = literals.into_iter().collect();
        if lits.is_empty() {
            return Err(LogicError::EmptyClause);
        }
        lits.sort();
        lits.dedup();
        for pair in lits.windows(2) {
            if pair[0].var() == pair[1].var() {
                return Err(LogicError::TautologicalClause);
            }
        }
        Ok(Clause { literals: lits })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_var(&self, var: VarIndex) -> bool {
        self.literals.iter().any(|l| l.var() == var)
    }

    pub fn max_var(&self) -> VarIndex {
        // literals are sorted and non-empty
        self.literals.last().unwrap().var()
    }

    pub fn eval(&self, world: &World) -> Result<bool, LogicError> {
        for lit in &self.literals {
            if lit.eval(world)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Renders the clause as its labels joined by ` | `.
    pub fn display<'a>(&'a self, scope: &'a Scope) -> impl fmt::Display + 'a {
        ClauseDisplay {
            clause: self,
            scope,
        }
    }
}

struct ClauseDisplay<'a> {
    clause: &'a Clause,
    scope: &'a Scope,
}

impl fmt::Display for ClauseDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, lit) in self.clause.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{}", lit.label(self.scope).unwrap_or("?"))?;
        }
        Ok(())
    }
}

/// A propositional formula over scope variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Lit(Literal),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn lit(var: VarIndex, positive: bool) -> Formula {
        Formula::Lit(Literal::new(var, positive))
    }

    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn from_clause(clause: &Clause) -> Formula {
        let mut lits = clause.literals().iter();
        let first = Formula::Lit(*lits.next().unwrap());
        lits.fold(first, |acc, lit| acc.or(Formula::Lit(*lit)))
    }

    /// Largest variable index mentioned, if any.
    pub fn max_var(&self) -> Option<VarIndex> {
        match self {
            Formula::True | Formula::False => None,
            Formula::Lit(l) => Some(l.var()),
            Formula::Not(inner) => inner.max_var(),
            Formula::And(a, b) | Formula::Or(a, b) => match (a.max_var(), b.max_var()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }
}

/// A total truth assignment over a scope, stored positionally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct World {
    values: Vec<bool>,
}

impl World {
    pub fn new(values: Vec<bool>) -> Self {
        World { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, var: VarIndex) -> Option<bool> {
        self.values.get(var).copied()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Position of this world in enumeration order: the first variable is
    /// the most significant digit and `true` sorts before `false`, so the
    /// all-true world has index 0 and the all-false world comes last.
    pub fn index(&self) -> usize {
        let n = self.values.len();
        self.values
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &v)| {
                if v {
                    acc
                } else {
                    acc | (1usize << (n - 1 - i))
                }
            })
    }

    /// Inverse of [`World::index`].
    pub fn from_index(n_vars: usize, index: usize) -> World {
        let values = (0..n_vars)
            .map(|i| index & (1usize << (n_vars - 1 - i)) == 0)
            .collect();
        World { values }
    }

    /// Labels of the assigned literals, in scope order.
    pub fn labels<'a>(&self, scope: &'a Scope) -> Vec<&'a str> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, &v)| scope.var(i).map(|var| var.label(v)))
            .collect()
    }
}

/// Classical evaluation of a formula in a world.
pub fn evaluate(formula: &Formula, world: &World) -> Result<bool, LogicError> {
    match formula {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Lit(lit) => lit.eval(world),
        Formula::Not(inner) => Ok(!evaluate(inner, world)?),
        Formula::And(a, b) => Ok(evaluate(a, world)? && evaluate(b, world)?),
        Formula::Or(a, b) => Ok(evaluate(a, world)? || evaluate(b, world)?),
    }
}

/// All worlds over the scope in which the formula is true, in enumeration
/// order.
pub fn models(formula: &Formula, scope: &Scope) -> Result<Vec<World>, LogicError> {
    if let Some(max) = formula.max_var() {
        if max >= scope.len() {
            return Err(LogicError::VariableOutOfRange {
                index: max,
                len: scope.len(),
            });
        }
    }
    let mut out = Vec::new();
    for world in enumerate_worlds(scope)? {
        if evaluate(formula, &world)? {
            out.push(world);
        }
    }
    Ok(out)
}

/// Every world over the scope, in a fixed deterministic order (see
/// [`World::index`]).
pub fn enumerate_worlds(scope: &Scope) -> Result<Vec<World>, LogicError> {
    enumerate_worlds_limited(scope, ENUMERATION_LIMIT)
}

/// As [`enumerate_worlds`] with an explicit variable-count limit.
pub fn enumerate_worlds_limited(scope: &Scope, limit: usize) -> Result<Vec<World>, LogicError> {
    let count = scope.world_count(limit)?;
    Ok((0..count).map(|i| World::from_index(scope.len(), i)).collect())
}
