//! Triangular-fuzzy necessity degrees: cells whose certainty is a fuzzy
//! number rather than a point value.
//!
//! A triangular degree `(lower, peak, upper)` has the canonical piecewise
//! linear membership function: 0 outside the support, 1 exactly at the
//! peak. Defuzzification takes the unique maximizer, i.e. the peak.
//! Degenerate triangles (`lower = peak = upper`) embed crisp degrees, and
//! on such tables every operation reduces to the crisp one.

use crate::logic::{Clause, LogicError, Scope, VarIndex, World};
use crate::measure::{Degree, InvalidDegree};
use crate::network::{
    ConditionalCell, NetworkNode, ParentInstantiation, PossibilisticNetwork, ValidationReport,
};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzyError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Degree(#[from] InvalidDegree),
    #[error("triangle ({lower}, {peak}, {upper}) is not ordered")]
    UnorderedTriangle { lower: f64, peak: f64, upper: f64 },
    #[error("fuzzy network is invalid:\n{0}")]
    Invalid(ValidationReport),
    #[error("node `{node}` has no cell for the requested value and parent assignment")]
    NoMatchingCell { node: String },
}

/// A triangular fuzzy degree over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangularDegree {
    lower: Degree,
    peak: Degree,
    upper: Degree,
}

impl TriangularDegree {
    pub fn new(lower: Degree, peak: Degree, upper: Degree) -> Result<Self, FuzzyError> {
        if lower > peak || peak > upper {
            return Err(FuzzyError::UnorderedTriangle {
                lower: lower.value(),
                peak: peak.value(),
                upper: upper.value(),
            });
        }
        Ok(TriangularDegree { lower, peak, upper })
    }

    pub fn from_values(lower: f64, peak: f64, upper: f64) -> Result<Self, FuzzyError> {
        TriangularDegree::new(Degree::new(lower)?, Degree::new(peak)?, Degree::new(upper)?)
    }

    /// The degenerate triangle representing a crisp degree.
    pub fn crisp(value: Degree) -> Self {
        TriangularDegree {
            lower: value,
            peak: value,
            upper: value,
        }
    }

    pub fn lower(self) -> Degree {
        self.lower
    }

    pub fn peak(self) -> Degree {
        self.peak
    }

    pub fn upper(self) -> Degree {
        self.upper
    }

    pub fn is_crisp(self) -> bool {
        self.lower == self.peak && self.peak == self.upper
    }

    /// Membership of `x`: 1 at the peak, linear down to 0 at the support
    /// bounds, 0 outside. A degenerate side contributes membership only at
    /// the point itself.
    pub fn membership(self, x: Degree) -> Degree {
        let (l, p, u) = (self.lower.value(), self.peak.value(), self.upper.value());
        let x = x.value();
        let m = if x < l || x > u {
            0.0
        } else if x == p {
            1.0
        } else if x < p {
            (x - l) / (p - l)
        } else {
            (u - x) / (u - p)
        };
        // ratios of ordered points stay within [0, 1]
        Degree::new(m).unwrap()
    }

    /// The unique maximizer of the membership function.
    pub fn defuzzify(self) -> Degree {
        self.peak
    }

    /// Componentwise minimum; preserves the triangle ordering.
    pub fn min(self, other: TriangularDegree) -> TriangularDegree {
        TriangularDegree {
            lower: self.lower.min(other.lower),
            peak: self.peak.min(other.peak),
            upper: self.upper.min(other.upper),
        }
    }
}

/// A table entry with a crisp possibility and a fuzzy necessity, plus an
/// optional shared membership-function label.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyCell {
    pub value: bool,
    pub parents: ParentInstantiation,
    pub pi: Degree,
    pub n: TriangularDegree,
    pub mu: Option<String>,
}

impl FuzzyCell {
    pub fn new(
        value: bool,
        parents: ParentInstantiation,
        pi: Degree,
        n: TriangularDegree,
    ) -> Self {
        FuzzyCell {
            value,
            parents,
            pi,
            n,
            mu: None,
        }
    }

    pub fn with_mu(mut self, mu: impl Into<String>) -> Self {
        self.mu = Some(mu.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyNode {
    pub var: VarIndex,
    pub parents: Vec<VarIndex>,
    pub cells: Vec<FuzzyCell>,
}

impl FuzzyNode {
    pub fn find_cell(&self, value: bool, parent_values: &[bool]) -> Option<&FuzzyCell> {
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
}

/// A network whose necessity entries are triangular degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyNetwork {
    pub name: String,
    pub scope: Scope,
    pub nodes: Vec<FuzzyNode>,
}

impl FuzzyNetwork {
    pub fn new(name: impl Into<String>, scope: Scope, nodes: Vec<FuzzyNode>) -> Self {
        FuzzyNetwork {
            name: name.into(),
            scope,
            nodes,
        }
    }

    /// Embeds a crisp network as degenerate triangles.
    pub fn from_crisp(net: &PossibilisticNetwork) -> Self {
        let nodes = net
            .nodes
            .iter()
            .map(|node| FuzzyNode {
                var: node.var,
                parents: node.parents.clone(),
                cells: node
                    .cells
                    .iter()
                    .map(|c| {
                        FuzzyCell::new(
                            c.value,
                            c.parents.clone(),
                            c.pi,
                            TriangularDegree::crisp(c.n),
                        )
                    })
                    .collect(),
            })
            .collect();
        FuzzyNetwork::new(net.name.clone(), net.scope.clone(), nodes)
    }

    /// Applies the crisp structural and normalization checks to the
    /// possibility part of the tables. Necessity entries carry their own
    /// triangle invariant and are not constrained here.
    pub fn validate(&self) -> ValidationReport {
        self.peak_network().validate_structure_only()
    }

    /// The crisp network obtained by defuzzifying every necessity entry.
    fn peak_network(&self) -> PossibilisticNetwork {
        let nodes = self
            .nodes
            .iter()
            .map(|node| NetworkNode {
                var: node.var,
                parents: node.parents.clone(),
                cells: node
                    .cells
                    .iter()
                    .map(|c| {
                        ConditionalCell::new(c.value, c.parents.clone(), c.pi, c.n.defuzzify())
                    })
                    .collect(),
            })
            .collect();
        PossibilisticNetwork::new(self.name.clone(), self.scope.clone(), nodes)
    }

    /// Componentwise-min chain rule over the fuzzy necessity entries.
    pub fn fuzzy_joint(&self, world: &World) -> Result<TriangularDegree, FuzzyError> {
        let mut acc = TriangularDegree::crisp(Degree::ONE);
        for node in &self.nodes {
            let value = world
                .value(node.var)
                .ok_or(LogicError::VariableOutOfRange {
                    index: node.var,
                    len: world.len(),
                })?;
            let parent_values = node
                .parents
                .iter()
                .map(|&p| world.value(p))
                .collect::<Option<Vec<bool>>>()
                .ok_or(LogicError::WorldSizeMismatch {
                    world: world.len(),
                    scope: self.scope.len(),
                })?;
            let cell =
                node.find_cell(value, &parent_values)
                    .ok_or_else(|| FuzzyError::NoMatchingCell {
                        node: self
                            .scope
                            .var(node.var)
                            .map_or_else(|| format!("#{}", node.var), |v| v.name().to_string()),
                    })?;
            acc = acc.min(cell.n);
        }
        Ok(acc)
    }

    /// Replaces every triangular entry by its peak. The result is checked
    /// against the full crisp constraints; violations are returned with the
    /// network rather than patched.
    pub fn defuzzified(&self) -> Result<(PossibilisticNetwork, ValidationReport), FuzzyError> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(FuzzyError::Invalid(report));
        }
        let network = self.peak_network();
        let issues = network.validate();
        Ok((network, issues))
    }
}

impl PossibilisticNetwork {
    /// Validation without the necessity-exclusivity rule, used for fuzzy
    /// tables whose necessity entries are not point values.
    fn validate_structure_only(&self) -> ValidationReport {
        let full = self.validate();
        let issues = full
            .issues()
            .iter()
            .filter(|i| !matches!(i, crate::network::ValidationIssue::NecessityConflict { .. }))
            .cloned()
            .collect::<Vec<_>>();
        ValidationReport::from_issues(issues)
    }
}

/// Weight selector for [`fuzzy_kb_necessity_of`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightChoice {
    Alpha,
    Beta,
}

/// Necessity of a world under a set of singly weighted clauses:
///
/// ```text
/// min over (clause, w) of max(m, 1 - w),  m = w if the world satisfies
///                                         the clause, 0 otherwise
/// ```
///
/// The empty set yields 1.
pub fn fuzzy_kb_necessity(
    formulas: &[(Clause, Degree)],
    world: &World,
) -> Result<Degree, FuzzyError> {
    let mut acc = Degree::ONE;
    for (clause, weight) in formulas {
        let m = if clause.eval(world)? {
            *weight
        } else {
            Degree::ZERO
        };
        acc = acc.min(m.max(weight.complement()));
    }
    Ok(acc)
}

/// As [`fuzzy_kb_necessity`], drawing the single weight per formula from a
/// dual-weighted base.
pub fn fuzzy_kb_necessity_of(
    kb: &crate::kb::AverageKb,
    world: &World,
    choice: WeightChoice,
) -> Result<Degree, FuzzyError> {
    let formulas: Vec<(Clause, Degree)> = kb
        .formulas()
        .iter()
        .map(|f| {
            let w = match choice {
                WeightChoice::Alpha => f.alpha(),
                WeightChoice::Beta => f.beta(),
            };
            (f.clause().clone(), w)
        })
        .collect();
    fuzzy_kb_necessity(&formulas, world)
}
