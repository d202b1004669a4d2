//! Possibilistic-necessity networks over binary variables.
//!
//! A network attaches to each node a dual conditional table: for every
//! child value and parent instantiation, a possibility degree and a
//! necessity degree. The joint over a world is the minimum of the local
//! possibilities times the minimum of the local necessities. Networks
//! compile to locally weighted knowledge bases and back, and the necessity
//! side extends to triangular fuzzy degrees with defuzzification.
//!
//! The semantics are exhaustive over worlds and deliberately definitional:
//! model sizes are capped, nothing is approximated.

pub mod format;
pub mod fuzzy;
pub mod kb;
pub mod logic;
pub mod measure;
pub mod network;
pub mod transform;

#[cfg(test)]
pub(crate) mod testnet;

pub use fuzzy::{FuzzyCell, FuzzyNetwork, FuzzyNode, TriangularDegree};
pub use kb::{AverageKb, WeightedFormula};
pub use logic::{Clause, Formula, Literal, Scope, Variable, World};
pub use measure::{Degree, DistKind, WorldDistribution};
pub use network::{
    ConditionalCell, NetworkNode, ParentInstantiation, PossibilisticNetwork, QueryMeasure,
    ValidationIssue, ValidationReport,
};
pub use transform::{LocalKb, LocalKbSet};
