//! Compilation between networks and per-node weighted knowledge bases.
//!
//! Each table cell with `pi < 1` compiles to one clause: the negated child
//! literal joined with the negated parent literals, weighted by
//! `alpha = 1 - pi` and `beta = 1 - n`. Cells with `pi = 1` emit nothing,
//! which is why their necessity value cannot survive a round trip: the
//! recovered table carries `n = 1` there, and [`roundtrip_report`] lists
//! exactly those sites instead of patching them.
//!
//! Decompilation works per node over the local scope (the node variable
//! followed by its parents) and always produces fully explicit tables.

use crate::kb::{AverageKb, KbError, WeightedFormula};
use crate::logic::{Clause, Literal, LogicError, Scope, VarIndex};
use crate::measure::{Degree, MeasureError};
use crate::network::{
    ConditionalCell, NetworkError, NetworkNode, ParentInstantiation, PossibilisticNetwork,
    ValidationReport,
};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("cannot compile an invalid network:\n{0}")]
    InvalidInput(ValidationReport),
    #[error("knowledge base `{kb}` does not range over node `{node}` and its parents")]
    ScopeMismatch { kb: String, node: String },
    #[error("clause in `{kb}` must mention the node variable exactly once")]
    ClauseMissingNode { kb: String },
}

/// One node's knowledge base, scoped to the node variable and its parents.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalKb {
    pub name: String,
    pub var: VarIndex,
    pub parents: Vec<VarIndex>,
    pub kb: AverageKb,
}

impl LocalKb {
    /// Checks that every clause mentions the node variable (index 0 of the
    /// local scope) exactly once.
    pub fn check_clauses(&self) -> Result<(), TransformError> {
        for f in self.kb.formulas() {
            let mentions = f
                .clause()
                .literals()
                .iter()
                .filter(|l| l.var() == 0)
                .count();
            if mentions != 1 {
                return Err(TransformError::ClauseMissingNode {
                    kb: self.name.clone(),
                });
            }
        }
        Ok(())
    }
}

/// A knowledge base per node plus the shared graph structure.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalKbSet {
    pub name: String,
    pub scope: Scope,
    pub kbs: Vec<LocalKb>,
}

impl LocalKbSet {
    pub fn kb_for_var(&self, var: VarIndex) -> Option<&LocalKb> {
        self.kbs.iter().find(|k| k.var == var)
    }
}

/// The local scope of a node: the node variable first, then its parents.
fn local_scope(
    global: &Scope,
    var: VarIndex,
    parents: &[VarIndex],
) -> Result<Scope, TransformError> {
    let mut vars = Vec::with_capacity(1 + parents.len());
    for &index in std::iter::once(&var).chain(parents) {
        let v = global
            .var(index)
            .ok_or(LogicError::VariableOutOfRange {
                index,
                len: global.len(),
            })?;
        vars.push(v.clone());
    }
    Ok(Scope::new(vars)?)
}

fn concrete_instantiations(width: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..(1usize << width)).map(move |bits| {
        (0..width)
            .map(|i| bits & (1usize << (width - 1 - i)) == 0)
            .collect()
    })
}

/// Compiles every node of a structurally valid network into its local
/// knowledge base. Warning-level elicitation issues (subnormal columns,
/// necessity conflicts) do not change which clauses exist or their
/// weights, so they do not block compilation.
pub fn network_to_kb(net: &PossibilisticNetwork) -> Result<LocalKbSet, TransformError> {
    let report = net.validate();
    if !report.is_valid() {
        return Err(TransformError::InvalidInput(report));
    }
    let mut kbs = Vec::with_capacity(net.nodes.len());
    for node in &net.nodes {
        let scope = local_scope(&net.scope, node.var, &node.parents)?;
        let mut formulas = Vec::new();
        for value in [true, false] {
            for assignment in concrete_instantiations(node.parents.len()) {
                let cell = node
                    .find_cell(value, &assignment)
                    .expect("valid network has a total table");
                if cell.pi.is_one() {
                    continue;
                }
                // negated child literal, negated parent literals
                let literals = std::iter::once(Literal::new(0, !value)).chain(
                    assignment
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| Literal::new(1 + i, !v)),
                );
                let clause = Clause::new(literals)?;
                formulas.push(WeightedFormula::new(
                    clause,
                    cell.pi.complement(),
                    cell.n.complement(),
                )?);
            }
        }
        formulas.sort_by(|a, b| {
            b.clause()
                .len()
                .cmp(&a.clause().len())
                .then_with(|| a.clause().cmp(b.clause()))
        });
        let name = format!("S{}", net.scope.var(node.var).unwrap().name());
        kbs.push(LocalKb {
            name,
            var: node.var,
            parents: node.parents.clone(),
            kb: AverageKb::from_formulas(scope, formulas)?,
        });
    }
    Ok(LocalKbSet {
        name: net.name.clone(),
        scope: net.scope.clone(),
        kbs,
    })
}

/// A network rebuilt from knowledge bases, together with any constraint
/// violations the rebuilt tables carry. Violations are reported, never
/// silently fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredNetwork {
    pub network: PossibilisticNetwork,
    pub issues: ValidationReport,
}

/// Rebuilds conditional tables from each node's local base.
///
/// For every child value `v` and concrete parent instantiation `u`, the
/// recovered degrees are the induced distributions of the local base read
/// out over the models of `v & u`. Tables come out fully explicit.
pub fn kb_to_network(kbs: &LocalKbSet) -> Result<RecoveredNetwork, TransformError> {
    let mut nodes = Vec::with_capacity(kbs.kbs.len());
    for local in &kbs.kbs {
        let expected = local_scope(&kbs.scope, local.var, &local.parents)?;
        if *local.kb.scope() != expected {
            let node = kbs
                .scope
                .var(local.var)
                .map_or_else(|| format!("#{}", local.var), |v| v.name().to_string());
            return Err(TransformError::ScopeMismatch {
                kb: local.name.clone(),
                node,
            });
        }
        local.check_clauses()?;
        let possibility = local.kb.possibility_distribution()?;
        let necessity = local.kb.necessity_distribution()?;
        let width = local.parents.len();
        let mut cells = Vec::with_capacity(2 << width);
        for value in [true, false] {
            for assignment in concrete_instantiations(width) {
                let mut formula = crate::logic::Formula::lit(0, value);
                for (i, &v) in assignment.iter().enumerate() {
                    formula = formula.and(crate::logic::Formula::lit(1 + i, v));
                }
                let pi = possibility.possibility_of(&formula)?;
                let n = necessity.guaranteed_degree(&formula)?;
                cells.push(ConditionalCell::new(
                    value,
                    ParentInstantiation::Explicit(assignment),
                    pi,
                    n,
                ));
            }
        }
        nodes.push(NetworkNode::new(local.var, local.parents.clone(), cells));
    }
    let network = PossibilisticNetwork::new(kbs.name.clone(), kbs.scope.clone(), nodes);
    let issues = network.validate();
    Ok(RecoveredNetwork { network, issues })
}

/// Comparison of one concrete table cell before and after the round trip.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRoundtrip {
    pub node: String,
    pub value_label: String,
    pub instantiation: String,
    pub original: (Degree, Degree),
    pub recovered: (Degree, Degree),
}

impl CellRoundtrip {
    pub fn pi_matches(&self) -> bool {
        self.original.0.approx_eq(self.recovered.0)
    }

    pub fn n_matches(&self) -> bool {
        self.original.1.approx_eq(self.recovered.1)
    }

    /// A cell whose necessity is unrecoverable: fully possible but not
    /// fully certain, so no clause was emitted for it.
    pub fn is_divergence_site(&self) -> bool {
        self.original.0.is_one() && !self.original.1.is_one()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundtripReport {
    pub cells: Vec<CellRoundtrip>,
}

impl RoundtripReport {
    pub fn all_pi_match(&self) -> bool {
        self.cells.iter().all(CellRoundtrip::pi_matches)
    }

    pub fn n_divergences(&self) -> Vec<&CellRoundtrip> {
        self.cells
            .iter()
            .filter(|c| !c.n_matches())
            .collect()
    }
}

impl fmt::Display for RoundtripReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} cells compared, pi {}",
            self.cells.len(),
            if self.all_pi_match() {
                "all match"
            } else {
                "MISMATCH"
            }
        )?;
        let diverging = self.n_divergences();
        if diverging.is_empty() {
            write!(f, "n: all match")?;
        } else {
            writeln!(f, "n: {} divergence site(s):", diverging.len())?;
            for (i, cell) in diverging.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(
                    f,
                    "  {} | {}: n {} -> {}",
                    cell.value_label,
                    cell.instantiation,
                    cell.original.1.value(),
                    cell.recovered.1.value()
                )?;
            }
        }
        Ok(())
    }
}

/// Runs the full compile/decompile cycle and compares every concrete cell.
pub fn roundtrip_report(net: &PossibilisticNetwork) -> Result<RoundtripReport, TransformError> {
    let recovered = kb_to_network(&network_to_kb(net)?)?;
    let mut cells = Vec::new();
    for node in &net.nodes {
        let node_name = net.scope.var(node.var).unwrap().name().to_string();
        let recovered_node = recovered
            .network
            .node_for_var(node.var)
            .expect("recovery preserves the node set");
        for value in [true, false] {
            for assignment in concrete_instantiations(node.parents.len()) {
                let original = node
                    .find_cell(value, &assignment)
                    .expect("valid network has a total table");
                let after = recovered_node
                    .find_cell(value, &assignment)
                    .expect("recovered tables are explicit and total");
                let shown = ParentInstantiation::Explicit(assignment.clone());
                cells.push(CellRoundtrip {
                    node: node_name.clone(),
                    value_label: net.scope.var(node.var).unwrap().label(value).to_string(),
                    instantiation: shown.display(&net.scope, &node.parents),
                    original: (original.pi, original.n),
                    recovered: (after.pi, after.n),
                });
            }
        }
    }
    Ok(RoundtripReport { cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testnet::table1_network;

    fn degree(v: f64) -> Degree {
        Degree::new(v).unwrap()
    }

    /// Collects (labels, alpha, beta) triples for one node's base.
    fn clause_summary(local: &LocalKb) -> Vec<(String, f64, f64)> {
        local
            .kb
            .formulas()
            .iter()
            .map(|f| {
                (
                    f.clause().display(local.kb.scope()).to_string(),
                    f.alpha().value(),
                    f.beta().value(),
                )
            })
            .collect()
    }

    fn assert_base(local: &LocalKb, expected: &[(&str, f64, f64)]) {
        let got = clause_summary(local);
        assert_eq!(got.len(), expected.len(), "{got:?}");
        for (clause, alpha, beta) in expected {
            let found = got
                .iter()
                .find(|(c, _, _)| c == clause)
                .unwrap_or_else(|| panic!("missing clause `{clause}` in {got:?}"));
            assert!((found.1 - alpha).abs() < 1e-9, "alpha for `{clause}`");
            assert!((found.2 - beta).abs() < 1e-9, "beta for `{clause}`");
        }
    }

    #[test]
    fn root_node_compiles_to_a_single_clause() {
        let kbs = network_to_kb(&table1_network()).unwrap();
        let a = &kbs.kbs[0];
        assert_base(a, &[("a", 0.5, 0.9)]);
        assert!(a.kb.formulas()[0].combined().approx_eq(degree(0.45)));
    }

    #[test]
    fn one_parent_node_compiles_to_three_clauses() {
        let kbs = network_to_kb(&table1_network()).unwrap();
        assert_base(
            &kbs.kbs[2],
            &[
                ("c | a", 0.6, 0.9),
                ("c | !a", 0.4, 0.9),
                ("!c | a", 0.3, 0.8),
            ],
        );
        let combined: Vec<f64> = kbs.kbs[2]
            .kb
            .formulas()
            .iter()
            .map(|f| f.combined().value())
            .collect();
        for want in [0.54, 0.36, 0.24] {
            assert!(combined.iter().any(|c| (c - want).abs() < 1e-9));
        }
    }

    #[test]
    fn else_rows_expand_to_concrete_clauses() {
        let kbs = network_to_kb(&table1_network()).unwrap();
        assert_base(
            &kbs.kbs[3],
            &[
                ("d | b | c", 0.3, 0.8),
                ("d | b | !c", 0.3, 0.8),
                ("d | !b | c", 0.7, 0.9),
                ("d | !b | !c", 0.5, 0.6),
                ("!d | !b | c", 0.5, 0.9),
            ],
        );
    }

    #[test]
    fn compilation_emits_no_tautologies_and_no_duplicates() {
        let kbs = network_to_kb(&table1_network()).unwrap();
        let total: usize = kbs.kbs.iter().map(|k| k.kb.len()).sum();
        assert_eq!(total, 12);
        for local in &kbs.kbs {
            local.check_clauses().unwrap();
        }
    }

    #[test]
    fn structurally_broken_network_is_refused() {
        let mut net = table1_network();
        net.nodes[0].cells.pop(); // table no longer total
        assert!(matches!(
            network_to_kb(&net),
            Err(TransformError::InvalidInput(_))
        ));
    }

    #[test]
    fn subnormal_columns_compile_and_survive_the_round_trip() {
        // a column where neither value is fully possible still compiles,
        // one clause per penalized cell, and comes back unchanged
        let mut net = table1_network();
        net.nodes[0].cells[0].pi = degree(0.4);
        assert!(net.validate().is_valid());
        let kbs = network_to_kb(&net).unwrap();
        assert_eq!(kbs.kbs[0].kb.len(), 2);
        let report = roundtrip_report(&net).unwrap();
        assert!(report.all_pi_match());
    }

    #[test]
    fn single_node_recovery() {
        let kbs = network_to_kb(&table1_network()).unwrap();
        let just_a = LocalKbSet {
            name: "a-only".into(),
            scope: Scope::from_names(&["A"]).unwrap(),
            kbs: vec![LocalKb {
                name: "SA".into(),
                var: 0,
                parents: vec![],
                kb: AverageKb::from_formulas(
                    Scope::from_names(&["A"]).unwrap(),
                    kbs.kbs[0].kb.formulas().to_vec(),
                )
                .unwrap(),
            }],
        };
        let recovered = kb_to_network(&just_a).unwrap();
        let node = &recovered.network.nodes[0];
        let pi_a = node.find_cell(true, &[]).unwrap().pi;
        let pi_na = node.find_cell(false, &[]).unwrap().pi;
        let n_a = node.find_cell(true, &[]).unwrap().n;
        let n_na = node.find_cell(false, &[]).unwrap().n;
        assert!(pi_a.approx_eq(Degree::ONE));
        assert!(pi_na.approx_eq(degree(0.5)));
        assert!(n_na.approx_eq(degree(0.1)));
        // the certainty of the fully-possible value is not in the base
        assert!(n_a.approx_eq(Degree::ONE));
    }

    #[test]
    fn one_parent_recovery_matches_the_conditional_column() {
        let kbs = network_to_kb(&table1_network()).unwrap();
        let just_b = LocalKbSet {
            name: "b-only".into(),
            scope: Scope::from_names(&["A", "B"]).unwrap(),
            kbs: vec![
                LocalKb {
                    name: "SA".into(),
                    var: 0,
                    parents: vec![],
                    kb: AverageKb::from_formulas(
                        Scope::from_names(&["A"]).unwrap(),
                        kbs.kbs[0].kb.formulas().to_vec(),
                    )
                    .unwrap(),
                },
                kbs.kbs[1].clone(),
            ],
        };
        let recovered = kb_to_network(&just_b).unwrap();
        let b = recovered.network.node_for_var(1).unwrap();
        let expect = [
            (true, true, 1.0),
            (false, true, 0.5),
            (true, false, 0.75),
            (false, false, 0.3),
        ];
        for (value, parent, pi) in expect {
            let cell = b.find_cell(value, &[parent]).unwrap();
            assert!(cell.pi.approx_eq(degree(pi)));
        }
    }

    #[test]
    fn scope_mismatch_is_detected() {
        let mut kbs = network_to_kb(&table1_network()).unwrap();
        // give node B a base over the wrong scope
        kbs.kbs[1].kb = AverageKb::new(Scope::from_names(&["B", "C"]).unwrap());
        assert!(matches!(
            kb_to_network(&kbs),
            Err(TransformError::ScopeMismatch { .. })
        ));
    }

    #[test]
    fn roundtrip_preserves_pi_and_lists_divergences() {
        let report = roundtrip_report(&table1_network()).unwrap();
        assert!(report.all_pi_match());
        assert_eq!(report.cells.len(), 18);
        // exactly the fully-possible cells diverge in n
        let divergences = report.n_divergences();
        assert_eq!(divergences.len(), 6);
        for cell in &report.cells {
            if cell.is_divergence_site() {
                assert!(!cell.n_matches());
                assert!(cell.recovered.1.approx_eq(Degree::ONE));
            } else {
                assert!(cell.n_matches());
            }
        }
    }

    #[test]
    fn fully_informative_network_roundtrips_exactly() {
        // every fully-possible cell carries n = 1, so nothing is lost
        let scope = Scope::from_names(&["A", "B"]).unwrap();
        let cell = |value, parents: &[bool], pi, n| {
            ConditionalCell::new(
                value,
                ParentInstantiation::Explicit(parents.to_vec()),
                degree(pi),
                degree(n),
            )
        };
        let nodes = vec![
            NetworkNode::new(
                0,
                vec![],
                vec![cell(true, &[], 1.0, 1.0), cell(false, &[], 0.4, 0.0)],
            ),
            NetworkNode::new(
                1,
                vec![0],
                vec![
                    cell(true, &[true], 1.0, 1.0),
                    cell(true, &[false], 0.6, 0.2),
                    cell(false, &[true], 0.3, 0.0),
                    cell(false, &[false], 1.0, 1.0),
                ],
            ),
        ];
        let net = PossibilisticNetwork::new("sharp", scope, nodes);
        assert!(net.validate().is_valid());
        let report = roundtrip_report(&net).unwrap();
        assert!(report.all_pi_match());
        assert!(report.n_divergences().is_empty());
    }

    #[test]
    fn degenerate_unconstrained_node_loses_all_necessity() {
        let scope = Scope::from_names(&["A"]).unwrap();
        let cell = |value| {
            ConditionalCell::new(
                value,
                ParentInstantiation::Explicit(vec![]),
                Degree::ONE,
                Degree::ZERO,
            )
        };
        let net = PossibilisticNetwork::new(
            "flat",
            scope,
            vec![NetworkNode::new(0, vec![], vec![cell(true), cell(false)])],
        );
        let kbs = network_to_kb(&net).unwrap();
        assert!(kbs.kbs[0].kb.is_empty());
        let report = roundtrip_report(&net).unwrap();
        assert!(report.all_pi_match());
        assert_eq!(report.n_divergences().len(), 2);
    }

    #[test]
    fn compile_decompile_is_idempotent_after_one_application() {
        let once = kb_to_network(&network_to_kb(&table1_network()).unwrap()).unwrap();
        let twice = kb_to_network(&network_to_kb(&once.network).unwrap()).unwrap();
        assert_eq!(once.network, twice.network);
    }
}
