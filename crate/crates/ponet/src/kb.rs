//! Weighted knowledge bases: clauses carrying a possibility-loss weight
//! `alpha` and a necessity-loss weight `beta`.
//!
//! A base induces two world distributions. A world that satisfies every
//! clause is fully possible and fully certain; a world that falsifies some
//! clauses is penalized by the largest violated weight:
//!
//! ```text
//! pi(w) = 1 - max { alpha_i : w falsifies clause_i }   (1 if none)
//! n(w)  = 1 - max { beta_i  : w falsifies clause_i }   (1 if none)
//! ```
//!
//! The two weights are independent; the combined weight `alpha * beta` is
//! derived for display and never stored.

use crate::logic::{enumerate_worlds, Clause, LogicError, Scope};
use crate::measure::{Degree, DistKind, MeasureError, WorldDistribution};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KbError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("a weighted formula must carry alpha > 0")]
    ZeroAlpha,
    #[error("clause mentions variable index {index} outside the base scope of {len}")]
    ClauseOutsideScope { index: usize, len: usize },
    #[error("knowledge bases range over different scopes")]
    ScopeMismatch,
    #[error("formula is not part of the knowledge base")]
    FormulaNotInBase,
}

/// A clause with its two violation weights.
///
/// `alpha = 0` would make the formula vacuous, so it is rejected;
/// `beta = 0` is allowed and means the formula carries no necessity
/// information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedFormula {
    clause: Clause,
    alpha: Degree,
    beta: Degree,
}

impl WeightedFormula {
    pub fn new(clause: Clause, alpha: Degree, beta: Degree) -> Result<Self, KbError> {
        if alpha == Degree::ZERO {
            return Err(KbError::ZeroAlpha);
        }
        Ok(WeightedFormula { clause, alpha, beta })
    }

    pub fn clause(&self) -> &Clause {
        &self.clause
    }

    pub fn alpha(&self) -> Degree {
        self.alpha
    }

    pub fn beta(&self) -> Degree {
        self.beta
    }

    /// The combined weight `alpha * beta`.
    pub fn combined(&self) -> Degree {
        self.alpha.product(self.beta)
    }
}

/// A set of weighted formulas over a fixed scope.
///
/// Duplicate clauses merge by keeping the larger alpha and the larger beta,
/// which leaves both induced distributions unchanged. Insertion order is
/// otherwise preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageKb {
    scope: Scope,
    formulas: Vec<WeightedFormula>,
}

impl AverageKb {
    pub fn new(scope: Scope) -> Self {
        AverageKb {
            scope,
            formulas: Vec::new(),
        }
    }

    pub fn from_formulas(
        scope: Scope,
        formulas: impl IntoIterator<Item = WeightedFormula>,
    ) -> Result<Self, KbError> {
        let mut kb = AverageKb::new(scope);
        for f in formulas {
            kb.insert(f)?;
        }
        Ok(kb)
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn formulas(&self) -> &[WeightedFormula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn insert(&mut self, formula: WeightedFormula) -> Result<(), KbError> {
        let max = formula.clause.max_var();
        if max >= self.scope.len() {
            return Err(KbError::ClauseOutsideScope {
                index: max,
                len: self.scope.len(),
            });
        }
        if let Some(existing) = self
            .formulas
            .iter_mut()
            .find(|f| f.clause == formula.clause)
        {
            existing.alpha = existing.alpha.max(formula.alpha);
            existing.beta = existing.beta.max(formula.beta);
        } else {
            self.formulas.push(formula);
        }
        Ok(())
    }

    fn penalty_distribution(
        &self,
        kind: DistKind,
        weight: impl Fn(&WeightedFormula) -> Degree,
    ) -> Result<WorldDistribution, KbError> {
        let mut values = Vec::new();
        for world in enumerate_worlds(&self.scope)? {
            let mut worst: Option<Degree> = None;
            for f in &self.formulas {
                if !f.clause.eval(&world)? {
                    let w = weight(f);
                    worst = Some(worst.map_or(w, |cur| cur.max(w)));
                }
            }
            values.push(worst.map_or(Degree::ONE, Degree::complement));
        }
        Ok(WorldDistribution::new(self.scope.clone(), kind, values)?)
    }

    /// The possibility distribution induced by the base.
    pub fn possibility_distribution(&self) -> Result<WorldDistribution, KbError> {
        self.penalty_distribution(DistKind::Possibility, WeightedFormula::alpha)
    }

    /// The necessity distribution induced by the base (beta analog of the
    /// possibility case).
    pub fn necessity_distribution(&self) -> Result<WorldDistribution, KbError> {
        self.penalty_distribution(DistKind::Necessity, WeightedFormula::beta)
    }

    /// Two bases are equivalent when both induced distributions agree on
    /// every world.
    pub fn equivalent(&self, other: &AverageKb) -> Result<bool, KbError> {
        if self.scope != other.scope {
            return Err(KbError::ScopeMismatch);
        }
        let pairs = [
            (
                self.possibility_distribution()?,
                other.possibility_distribution()?,
            ),
            (
                self.necessity_distribution()?,
                other.necessity_distribution()?,
            ),
        ];
        for (mine, theirs) in &pairs {
            let same = mine
                .values()
                .iter()
                .zip(theirs.values())
                .all(|(a, b)| a.approx_eq(*b));
            if !same {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A formula is subsumed when removing it leaves an equivalent base.
    pub fn is_subsumed(&self, formula: &WeightedFormula) -> Result<bool, KbError> {
        let index = self
            .formulas
            .iter()
            .position(|f| f == formula)
            .ok_or(KbError::FormulaNotInBase)?;
        self.equivalent(&self.without(index))
    }

    fn without(&self, index: usize) -> AverageKb {
        let mut formulas = self.formulas.clone();
        formulas.remove(index);
        AverageKb {
            scope: self.scope.clone(),
            formulas,
        }
    }

    /// Removes subsumed formulas until none remain.
    ///
    /// Removal order is fixed (largest clauses first, ties broken by the
    /// canonical literal order) so the result is unique; surviving formulas
    /// keep their original order.
    pub fn normalized(&self) -> Result<AverageKb, KbError> {
        let mut current = self.clone();
        loop {
            let mut candidates: Vec<usize> = (0..current.formulas.len()).collect();
            candidates.sort_by(|&a, &b| {
                let (ca, cb) = (&current.formulas[a].clause, &current.formulas[b].clause);
                cb.len().cmp(&ca.len()).then_with(|| ca.cmp(cb))
            });
            let mut removed = false;
            for index in candidates {
                if current.equivalent(&current.without(index))? {
                    current.formulas.remove(index);
                    removed = true;
                    break;
                }
            }
            if !removed {
                return Ok(current);
            }
        }
    }
}
