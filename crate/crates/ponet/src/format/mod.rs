//! Line-oriented text formats and the small query-expression language.
//!
//! Three dialects share one shape: a header, `var` declarations, `parents`
//! declarations, then the body. `#` starts a comment, blank lines are
//! ignored, and every reference must be declared on an earlier line.
//!
//! Network (`.pnet`):
//!
//! ```text
//! network table1
//! var A
//! var B
//! parents B: A
//! cell A: a pi=1 n=0.6
//! cell B: b | a pi=1 n=0.5
//! cell B: b | else pi=0.7 n=0.1      # residual row
//! ```
//!
//! Knowledge-base set (`.pkb`):
//!
//! ```text
//! kbset table1
//! var A
//! kb SA for A
//! clause a alpha=0.5 beta=0.9
//! ```
//!
//! Fuzzy network (`.pfnet`): as `.pnet` with header `fuzzy`, necessity
//! entries optionally written as `n=l/p/u` triangles, and an optional
//! `mu=NAME` membership label per cell.

mod formula;
mod joint;
mod parse;
mod render;
mod span;

pub use formula::{parse_formula, FormulaError};
pub use joint::{format_degree, render_joint, JointFormat};
pub use parse::{parse_fuzzy, parse_kb_set, parse_network};
pub use render::{render_fuzzy, render_kb_set, render_network};
pub use span::{ParseError, ParseErrorKind, SourceSpan};

use crate::fuzzy::FuzzyNetwork;
use crate::network::PossibilisticNetwork;
use crate::transform::LocalKbSet;

/// What a parsed file contains.
#[derive(Debug, Clone, PartialEq)]
pub enum DocumentPayload {
    Network(PossibilisticNetwork),
    KbSet(LocalKbSet),
    Fuzzy(FuzzyNetwork),
}

/// Which declaration a provenance span belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclRef {
    Header,
    Var(String),
    Parents(String),
    Cell { node: String, ordinal: usize },
    Kb(String),
    Clause { kb: String, ordinal: usize },
}

/// A parsed file: the payload plus the source span of every declaration.
///
/// Structural equality and round-trip comparisons are defined on the
/// payload; spans are provenance only.
#[derive(Debug, Clone)]
pub struct Document {
    pub payload: DocumentPayload,
    pub decls: Vec<(DeclRef, SourceSpan)>,
}

impl Document {
    pub fn span_of(&self, decl: &DeclRef) -> Option<&SourceSpan> {
        self.decls
            .iter()
            .find(|(d, _)| d == decl)
            .map(|(_, span)| span)
    }

    pub fn as_network(&self) -> Option<&PossibilisticNetwork> {
        match &self.payload {
            DocumentPayload::Network(net) => Some(net),
            _ => None,
        }
    }

    pub fn as_kb_set(&self) -> Option<&LocalKbSet> {
        match &self.payload {
            DocumentPayload::KbSet(kbs) => Some(kbs),
            _ => None,
        }
    }

    pub fn as_fuzzy(&self) -> Option<&FuzzyNetwork> {
        match &self.payload {
            DocumentPayload::Fuzzy(f) => Some(f),
            _ => None,
        }
    }
}
