//! Networks of binary nodes over a DAG, each carrying a dual conditional
//! table: a possibility degree and a necessity degree per child value and
//! parent instantiation.
//!
//! The joint over a world is computed by the chain rule
//!
//! ```text
//! min_pi(w) = min over nodes of pi(value | parent values)
//! min_n(w)  = min over nodes of n(value | parent values)
//! avg(w)    = min_pi(w) * min_n(w)
//! ```
//!
//! Per parent instantiation a table must be normalized
//! (`max(pi(x|u), pi(!x|u)) = 1`) and necessity-exclusive (`n(x|u) = 1`
//! forces `n(!x|u) = 0`). Joint normalization over worlds is *not* implied
//! by the per-cell rules and is reported, never enforced.

use crate::logic::{enumerate_worlds, Formula, LogicError, Scope, VarIndex, World};
use crate::measure::{Degree, DistKind, MeasureError, WorldDistribution};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("node `{node}` has no cell for the requested value and parent assignment")]
    NoMatchingCell { node: String },
    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),
    #[error("network is invalid:\n{0}")]
    Invalid(ValidationReport),
}

/// A total assignment over a node's parents, or the residual `else` row
/// covering every assignment not explicitly listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParentInstantiation {
    Explicit(Vec<bool>),
    Else,
}

impl ParentInstantiation {
    pub fn is_else(&self) -> bool {
        matches!(self, ParentInstantiation::Else)
    }

    /// Human-readable form against the node's parent list: `b !c`, `else`,
    /// or `-` for a root.
    pub fn display(&self, scope: &Scope, parents: &[VarIndex]) -> String {
        match self {
            ParentInstantiation::Else => "else".to_string(),
            ParentInstantiation::Explicit(values) if values.is_empty() => "-".to_string(),
            ParentInstantiation::Explicit(values) => values
                .iter()
                .zip(parents)
                .map(|(&v, &p)| scope.var(p).map_or("?", |var| var.label(v)))
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

/// One table entry: degrees for a child value under a parent instantiation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalCell {
    pub value: bool,
    pub parents: ParentInstantiation,
    pub pi: Degree,
    pub n: Degree,
}

impl ConditionalCell {
    pub fn new(value: bool, parents: ParentInstantiation, pi: Degree, n: Degree) -> Self {
        ConditionalCell {
            value,
            parents,
            pi,
            n,
        }
    }
}

/// A variable, its parents, and its conditional table.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkNode {
    pub var: VarIndex,
    pub parents: Vec<VarIndex>,
    pub cells: Vec<ConditionalCell>,
}

impl NetworkNode {
    pub fn new(var: VarIndex, parents: Vec<VarIndex>, cells: Vec<ConditionalCell>) -> Self {
        NetworkNode {
            var,
            parents,
            cells,
        }
    }

    /// The cell matching a child value and concrete parent values:
    /// explicit rows first, then the `else` row for that value.
    pub fn find_cell(&self, value: bool, parent_values: &[bool]) -> Option<&ConditionalCell> {
        self.cells
            .iter()
            .find(|c| {
                c.value == value
                    && matches!(&c.parents, ParentInstantiation::Explicit(vs) if vs == parent_values)
            })
            .or_else(|| {
                self.cells
                    .iter()
                    .find(|c| c.value == value && c.parents.is_else())
            })
    }

    fn parent_values_in(&self, world: &World) -> Option<Vec<bool>> {
        self.parents.iter().map(|&p| world.value(p)).collect()
    }
}

/// The three degrees the chain rule yields for one world.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDegrees {
    pub min_pi: Degree,
    pub min_n: Degree,
    pub average: Degree,
}

/// The full joint over all worlds, one distribution per component.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    pub possibility: WorldDistribution,
    pub necessity: WorldDistribution,
    pub average: WorldDistribution,
}

/// Which degree a network query should compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryMeasure {
    /// Max of the joint possibility over the models of the formula.
    Possibility,
    /// Dual necessity: `1 - possibility(!p)`.
    NecessityDual,
    /// Max of the joint average over the models of the formula.
    Average,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PossibilisticNetwork {
    pub name: String,
    pub scope: Scope,
    pub nodes: Vec<NetworkNode>,
}

impl PossibilisticNetwork {
    pub fn new(name: impl Into<String>, scope: Scope, nodes: Vec<NetworkNode>) -> Self {
        PossibilisticNetwork {
            name: name.into(),
            scope,
            nodes,
        }
    }

    pub fn node_for_var(&self, var: VarIndex) -> Option<&NetworkNode> {
        self.nodes.iter().find(|n| n.var == var)
    }

    fn node_name(&self, node: &NetworkNode) -> String {
        self.scope
            .var(node.var)
            .map_or_else(|| format!("#{}", node.var), |v| v.name().to_string())
    }

    /// Checks every structural and numerical constraint, returning all
    /// violations found. Never mutates.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        self.check_structure(&mut issues);
        self.check_acyclic(&mut issues);
        for node in &self.nodes {
            self.check_table(node, &mut issues);
        }
        ValidationReport { issues }
    }

    fn check_structure(&self, issues: &mut Vec<ValidationIssue>) {
        for (i, var) in self.scope.vars().iter().enumerate() {
            let count = self.nodes.iter().filter(|n| n.var == i).count();
            if count == 0 {
                issues.push(ValidationIssue::MissingNode {
                    variable: var.name().to_string(),
                });
            } else if count > 1 {
                issues.push(ValidationIssue::DuplicateNode {
                    variable: var.name().to_string(),
                });
            }
        }
        for node in &self.nodes {
            let name = self.node_name(node);
            if node.var >= self.scope.len() {
                issues.push(ValidationIssue::DanglingParent {
                    node: name.clone(),
                    parent: format!("#{}", node.var),
                });
                continue;
            }
            for (i, &p) in node.parents.iter().enumerate() {
                if p >= self.scope.len() {
                    issues.push(ValidationIssue::DanglingParent {
                        node: name.clone(),
                        parent: format!("#{p}"),
                    });
                } else if node.parents[..i].contains(&p) {
                    issues.push(ValidationIssue::DuplicateParent {
                        node: name.clone(),
                        parent: self.scope.var(p).unwrap().name().to_string(),
                    });
                }
            }
        }
    }

    fn check_acyclic(&self, issues: &mut Vec<ValidationIssue>) {
        // Kahn's algorithm over the parent -> child edges.
        let n = self.scope.len();
        let mut indegree = vec![0usize; n];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for node in &self.nodes {
            if node.var >= n {
                continue;
            }
            for &p in &node.parents {
                if p < n {
                    indegree[node.var] += 1;
                    children[p].push(node.var);
                }
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &c in &children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    queue.push(c);
                }
            }
        }
        if seen < n {
            let stuck = (0..n)
                .filter(|&i| indegree[i] > 0)
                .filter_map(|i| self.scope.var(i).map(|v| v.name().to_string()))
                .collect();
            issues.push(ValidationIssue::Cycle { nodes: stuck });
        }
    }

    fn check_table(&self, node: &NetworkNode, issues: &mut Vec<ValidationIssue>) {
        let name = self.node_name(node);
        if node.var >= self.scope.len() || node.parents.iter().any(|&p| p >= self.scope.len()) {
            return; // already reported as dangling
        }
        let width = node.parents.len();
        for cell in &node.cells {
            if let ParentInstantiation::Explicit(vs) = &cell.parents {
                if vs.len() != width {
                    issues.push(ValidationIssue::BadInstantiationWidth {
                        node: name.clone(),
                        got: vs.len(),
                        expected: width,
                    });
                    return;
                }
            }
        }
        for value in [true, false] {
            let else_count = node
                .cells
                .iter()
                .filter(|c| c.value == value && c.parents.is_else())
                .count();
            if else_count > 1 {
                issues.push(ValidationIssue::DuplicateElse {
                    node: name.clone(),
                    value_label: self.scope.var(node.var).unwrap().label(value).to_string(),
                });
            }
        }
        if width > crate::logic::ENUMERATION_LIMIT {
            return;
        }
        for bits in 0..(1usize << width) {
            let assignment: Vec<bool> = (0..width)
                .map(|i| bits & (1usize << (width - 1 - i)) == 0)
                .collect();
            let display = || {
                if width == 0 {
                    "-".to_string()
                } else {
                    assignment
                        .iter()
                        .zip(&node.parents)
                        .map(|(&v, &p)| self.scope.var(p).unwrap().label(v))
                        .collect::<Vec<_>>()
                        .join(" ")
                }
            };
            let mut degrees = [None, None]; // (pi, n) per child value
            for value in [true, false] {
                let explicit: Vec<&ConditionalCell> = node
                    .cells
                    .iter()
                    .filter(|c| {
                        c.value == value
                            && matches!(&c.parents, ParentInstantiation::Explicit(vs) if *vs == assignment)
                    })
                    .collect();
                let label = self.scope.var(node.var).unwrap().label(value).to_string();
                if explicit.len() > 1 {
                    issues.push(ValidationIssue::OverlappingCells {
                        node: name.clone(),
                        value_label: label,
                        instantiation: display(),
                    });
                    continue;
                }
                let cell = if let Some(c) = explicit.first() {
                    Some(*c)
                } else {
                    node.cells
                        .iter()
                        .find(|c| c.value == value && c.parents.is_else())
                };
                match cell {
                    Some(c) => degrees[usize::from(!value)] = Some((c.pi, c.n)),
                    None => issues.push(ValidationIssue::NonTotalTable {
                        node: name.clone(),
                        value_label: label,
                        instantiation: display(),
                    }),
                }
            }
            if let (Some((pi_t, n_t)), Some((pi_f, n_f))) = (degrees[0], degrees[1]) {
                if !pi_t.max(pi_f).is_one() {
                    issues.push(ValidationIssue::NormalizationViolation {
                        node: name.clone(),
                        instantiation: display(),
                        max_pi: pi_t.max(pi_f).value(),
                    });
                }
                if (n_t.is_one() && !n_f.is_zero()) || (n_f.is_one() && !n_t.is_zero()) {
                    issues.push(ValidationIssue::NecessityConflict {
                        node: name.clone(),
                        instantiation: display(),
                    });
                }
            }
        }
    }

    /// Degrees of the cell selected for `node` by the world's values.
    pub fn local_degrees(
        &self,
        world: &World,
        node_index: usize,
    ) -> Result<(Degree, Degree), NetworkError> {
        let node = self
            .nodes
            .get(node_index)
            .ok_or(NetworkError::NodeOutOfRange(node_index))?;
        let value = world
            .value(node.var)
            .ok_or(LogicError::VariableOutOfRange {
                index: node.var,
                len: world.len(),
            })?;
        let parent_values = node
            .parent_values_in(world)
            .ok_or(LogicError::WorldSizeMismatch {
                world: world.len(),
                scope: self.scope.len(),
            })?;
        let cell = node
            .find_cell(value, &parent_values)
            .ok_or_else(|| NetworkError::NoMatchingCell {
                node: self.node_name(node),
            })?;
        Ok((cell.pi, cell.n))
    }

    /// Chain rule at a single world.
    pub fn joint_average(&self, world: &World) -> Result<JointDegrees, NetworkError> {
        let mut min_pi = Degree::ONE;
        let mut min_n = Degree::ONE;
        for i in 0..self.nodes.len() {
            let (pi, n) = self.local_degrees(world, i)?;
            min_pi = min_pi.min(pi);
            min_n = min_n.min(n);
        }
        Ok(JointDegrees {
            min_pi,
            min_n,
            average: min_pi.product(min_n),
        })
    }

    /// Chain rule at every world, in enumeration order.
    pub fn joint_table(&self) -> Result<JointTable, NetworkError> {
        let worlds = enumerate_worlds(&self.scope)?;
        let mut pi = Vec::with_capacity(worlds.len());
        let mut n = Vec::with_capacity(worlds.len());
        let mut avg = Vec::with_capacity(worlds.len());
        for world in &worlds {
            let joint = self.joint_average(world)?;
            pi.push(joint.min_pi);
            n.push(joint.min_n);
            avg.push(joint.average);
        }
        let possibility = WorldDistribution::new(self.scope.clone(), DistKind::Possibility, pi)?;
        let necessity = WorldDistribution::new(self.scope.clone(), DistKind::Necessity, n)?;
        let average = WorldDistribution::new(self.scope.clone(), DistKind::Average, avg)?;
        Ok(JointTable {
            possibility,
            necessity,
            average,
        })
    }

    /// Measures a formula against the joint.
    pub fn query(&self, formula: &Formula, measure: QueryMeasure) -> Result<Degree, NetworkError> {
        let joint = self.joint_table()?;
        let degree = match measure {
            QueryMeasure::Possibility => joint.possibility.possibility_of(formula)?,
            QueryMeasure::NecessityDual => joint.possibility.necessity_by_duality(formula)?,
            QueryMeasure::Average => joint.average.guaranteed_degree(formula)?,
        };
        Ok(degree)
    }
}

/// How severe a validation issue is.
///
/// Structural defects make a network unusable. The numeric elicitation
/// constraints (per-instantiation normalization and necessity
/// exclusivity) are reported as warnings: tables that breach them still
/// have well-defined chain-rule semantics and compile faithfully, so they
/// are surfaced rather than blocking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    Cycle {
        nodes: Vec<String>,
    },
    MissingNode {
        variable: String,
    },
    DuplicateNode {
        variable: String,
    },
    DanglingParent {
        node: String,
        parent: String,
    },
    DuplicateParent {
        node: String,
        parent: String,
    },
    BadInstantiationWidth {
        node: String,
        got: usize,
        expected: usize,
    },
    NonTotalTable {
        node: String,
        value_label: String,
        instantiation: String,
    },
    OverlappingCells {
        node: String,
        value_label: String,
        instantiation: String,
    },
    DuplicateElse {
        node: String,
        value_label: String,
    },
    NormalizationViolation {
        node: String,
        instantiation: String,
        max_pi: f64,
    },
    NecessityConflict {
        node: String,
        instantiation: String,
    },
}

impl ValidationIssue {
    pub fn severity(&self) -> Severity {
        match self {
            ValidationIssue::NormalizationViolation { .. }
            | ValidationIssue::NecessityConflict { .. } => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::Cycle { nodes } => {
                write!(f, "cycle detected among nodes: {}", nodes.join(", "))
            }
            ValidationIssue::MissingNode { variable } => {
                write!(f, "variable `{variable}` has no conditional table")
            }
            ValidationIssue::DuplicateNode { variable } => {
                write!(f, "variable `{variable}` has more than one node")
            }
            ValidationIssue::DanglingParent { node, parent } => {
                write!(f, "node `{node}` references unknown parent `{parent}`")
            }
            ValidationIssue::DuplicateParent { node, parent } => {
                write!(f, "node `{node}` lists parent `{parent}` twice")
            }
            ValidationIssue::BadInstantiationWidth {
                node,
                got,
                expected,
            } => write!(
                f,
                "node `{node}` has a cell assigning {got} parents where {expected} are declared"
            ),
            ValidationIssue::NonTotalTable {
                node,
                value_label,
                instantiation,
            } => write!(
                f,
                "node `{node}` is missing the cell for `{value_label} | {instantiation}`"
            ),
            ValidationIssue::OverlappingCells {
                node,
                value_label,
                instantiation,
            } => write!(
                f,
                "node `{node}` has overlapping cells for `{value_label} | {instantiation}`"
            ),
            ValidationIssue::DuplicateElse { node, value_label } => {
                write!(f, "node `{node}` has more than one else row for `{value_label}`")
            }
            ValidationIssue::NormalizationViolation {
                node,
                instantiation,
                max_pi,
            } => write!(
                f,
                "node `{node}` at `{instantiation}`: neither value reaches possibility 1 (max {max_pi})"
            ),
            ValidationIssue::NecessityConflict {
                node,
                instantiation,
            } => write!(
                f,
                "node `{node}` at `{instantiation}`: necessity 1 on one value requires 0 on the other"
            ),
        }
    }
}

/// All violations found by [`PossibilisticNetwork::validate`]; empty means
/// valid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn from_issues(issues: Vec<ValidationIssue>) -> Self {
        ValidationReport { issues }
    }

    /// No errors; warnings may remain.
    pub fn is_valid(&self) -> bool {
        !self
            .issues
            .iter()
            .any(|i| i.severity() == Severity::Error)
    }

    /// No issues of any severity.
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn issues(&self) -> &[ValidationIssue] {
        &self.issues
    }

    pub fn warnings(&self) -> impl Iterator<Item = &ValidationIssue> {
        self.issues
            .iter()
            .filter(|i| i.severity() == Severity::Warning)
    }

    pub fn errors(&self) -> impl Iterator<Item = &ValidationIssue> {
        self.issues
            .iter()
            .filter(|i| i.severity() == Severity::Error)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}
