//! Degrees in `[0, 1]`, world distributions, and the induced measures.
//!
//! A possibility-kind distribution maps each world to how compatible it is
//! with the available knowledge; the measure of a formula is the maximum
//! over its models. Necessity is *not* derived from possibility implicitly:
//! elicited necessity values live in their own distributions, and the dual
//! reading `N(p) = 1 - possibility(!p)` is available only as the explicit
//! [`WorldDistribution::necessity_by_duality`] operation.

use crate::logic::{enumerate_worlds, evaluate, Formula, LogicError, Scope, World};
use thiserror::Error;

/// Absolute tolerance used for every degree comparison in the crate.
pub const DEGREE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Degree(#[from] InvalidDegree),
    #[error("expected a {expected:?} distribution, got {found:?}")]
    KindMismatch { expected: DistKind, found: DistKind },
    #[error("distribution holds {values} values but the scope has {worlds} worlds")]
    WorldCountMismatch { values: usize, worlds: usize },
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
#[error("degree {0} lies outside [0, 1]")]
pub struct InvalidDegree(pub f64);

/// A degree in the closed unit interval.
///
/// Construction excludes NaN and out-of-range values, so degrees are
/// totally ordered. Equality is bitwise; use [`Degree::approx_eq`] when
/// comparing computed values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Degree(f64);

impl Degree {
    pub const ZERO: Degree = Degree(0.0);
    pub const ONE: Degree = Degree(1.0);

    pub fn new(value: f64) -> Result<Self, InvalidDegree> {
        if value.is_nan() || !(0.0..=1.0).contains(&value) {
            return Err(InvalidDegree(value));
        }
        Ok(Degree(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn approx_eq(self, other: Degree) -> bool {
        (self.0 - other.0).abs() <= DEGREE_TOLERANCE
    }

    pub fn is_one(self) -> bool {
        self.approx_eq(Degree::ONE)
    }

    pub fn is_zero(self) -> bool {
        self.approx_eq(Degree::ZERO)
    }

    /// `1 - self`.
    pub fn complement(self) -> Degree {
        Degree(1.0 - self.0)
    }

    /// Product; closed on `[0, 1]`.
    pub fn product(self, rhs: Degree) -> Degree {
        Degree(self.0 * rhs.0)
    }
}

impl Eq for Degree {}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // no NaN by construction
        self.0.partial_cmp(&other.0).unwrap()
    }
}

impl std::fmt::Display for Degree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// What the values of a [`WorldDistribution`] mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistKind {
    Possibility,
    Necessity,
    Average,
}

/// A total map from worlds to degrees, indexed in enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldDistribution {
    scope: Scope,
    kind: DistKind,
    values: Vec<Degree>,
}

impl WorldDistribution {
    pub fn new(scope: Scope, kind: DistKind, values: Vec<Degree>) -> Result<Self, MeasureError> {
        let worlds = scope.world_count(crate::logic::ENUMERATION_LIMIT)?;
        if values.len() != worlds {
            return Err(MeasureError::WorldCountMismatch {
                values: values.len(),
                worlds,
            });
        }
        Ok(WorldDistribution {
            scope,
            kind,
            values,
        })
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn kind(&self) -> DistKind {
        self.kind
    }

    pub fn values(&self) -> &[Degree] {
        &self.values
    }

    pub fn value_at(&self, world: &World) -> Result<Degree, MeasureError> {
        if world.len() != self.scope.len() {
            return Err(LogicError::WorldSizeMismatch {
                world: world.len(),
                scope: self.scope.len(),
            }
            .into());
        }
        Ok(self.values[world.index()])
    }

    /// Largest degree over all worlds.
    pub fn max(&self) -> Degree {
        self.values.iter().copied().max().unwrap_or(Degree::ZERO)
    }

    /// A possibility distribution is normalized when some world is fully
    /// possible.
    pub fn is_normalized(&self) -> bool {
        self.max().is_one()
    }

    fn expect_kind(&self, expected: &[DistKind]) -> Result<(), MeasureError> {
        if expected.contains(&self.kind) {
            return Ok(());
        }
        Err(MeasureError::KindMismatch {
            expected: expected[0],
            found: self.kind,
        })
    }

    fn max_over_models(&self, formula: &Formula) -> Result<Degree, MeasureError> {
        if let Some(max) = formula.max_var() {
            if max >= self.scope.len() {
                return Err(LogicError::VariableOutOfRange {
                    index: max,
                    len: self.scope.len(),
                }
                .into());
            }
        }
        let mut best = Degree::ZERO;
        for world in enumerate_worlds(&self.scope)? {
            if evaluate(formula, &world)? {
                best = best.max(self.values[world.index()]);
            }
        }
        Ok(best)
    }

    /// Possibility (consistency) degree of a formula: max over its models,
    /// 0 for a contradiction.
    pub fn possibility_of(&self, formula: &Formula) -> Result<Degree, MeasureError> {
        self.expect_kind(&[DistKind::Possibility])?;
        self.max_over_models(formula)
    }

    /// Necessity obtained from possibility by duality:
    /// `1 - possibility_of(!p)`.
    pub fn necessity_by_duality(&self, formula: &Formula) -> Result<Degree, MeasureError> {
        self.expect_kind(&[DistKind::Possibility])?;
        Ok(self.max_over_models(&formula.clone().not())?.complement())
    }

    /// Max-over-models read-out for necessity- and average-valued world
    /// maps. Same shape as [`WorldDistribution::possibility_of`], kept
    /// separate because it carries a different meaning.
    pub fn guaranteed_degree(&self, formula: &Formula) -> Result<Degree, MeasureError> {
        self.expect_kind(&[DistKind::Necessity, DistKind::Average])?;
        self.max_over_models(formula)
    }
}
