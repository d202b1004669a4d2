//! Test-only builder for the four-node reference network used across the
//! module tests.

use crate::measure::Degree;
use crate::network::{ConditionalCell, NetworkNode, ParentInstantiation, PossibilisticNetwork};
use crate::logic::Scope;

fn cell(value: bool, parents: Option<&[bool]>, pi: f64, n: f64) -> ConditionalCell {
    let parents = match parents {
        Some(values) => ParentInstantiation::Explicit(values.to_vec()),
        None => ParentInstantiation::Else,
    };
    ConditionalCell::new(
        value,
        parents,
        Degree::new(pi).unwrap(),
        Degree::new(n).unwrap(),
    )
}

/// A -> B, A -> C, {B, C} -> D with the dual conditional tables used by
/// the golden joint-table tests.
pub fn table1_network() -> PossibilisticNetwork {
    let scope = Scope::from_names(&["A", "B", "C", "D"]).unwrap();
    let nodes = vec![
        NetworkNode::new(
            0,
            vec![],
            vec![
                cell(true, Some(&[]), 1.0, 0.6),
                cell(false, Some(&[]), 0.5, 0.1),
            ],
        ),
        NetworkNode::new(
            1,
            vec![0],
            vec![
                cell(true, Some(&[true]), 1.0, 0.5),
                cell(true, Some(&[false]), 0.75, 0.2),
                cell(false, Some(&[true]), 0.5, 0.25),
                cell(false, Some(&[false]), 0.3, 0.0),
            ],
        ),
        NetworkNode::new(
            2,
            vec![0],
            vec![
                cell(true, Some(&[true]), 1.0, 0.3),
                cell(true, Some(&[false]), 0.7, 0.2),
                cell(false, Some(&[true]), 0.6, 0.1),
                cell(false, Some(&[false]), 0.4, 0.1),
            ],
        ),
        NetworkNode::new(
            3,
            vec![1, 2],
            vec![
                cell(true, Some(&[true, true]), 1.0, 0.2),
                cell(true, Some(&[true, false]), 0.5, 0.1),
                cell(true, None, 1.0, 0.3),
                cell(false, Some(&[true, true]), 0.5, 0.4),
                cell(false, Some(&[true, false]), 0.3, 0.1),
                cell(false, None, 0.7, 0.2),
            ],
        ),
    ];
    PossibilisticNetwork::new("table1", scope, nodes)
}

/// The sixteen joint rows the chain rule yields for [`table1_network`], in
/// enumeration order: (min_pi, min_n, average).
pub fn table1_joint_rows() -> [(f64, f64, f64); 16] {
    [
        (1.0, 0.2, 0.2),
        (0.5, 0.3, 0.15),
        (0.5, 0.1, 0.05),
        (0.3, 0.1, 0.03),
        (0.5, 0.25, 0.125),
        (0.5, 0.2, 0.1),
        (0.5, 0.1, 0.05),
        (0.5, 0.1, 0.05),
        (0.5, 0.1, 0.05),
        (0.5, 0.1, 0.05),
        (0.4, 0.1, 0.04),
        (0.3, 0.1, 0.03),
        (0.3, 0.0, 0.0),
        (0.3, 0.0, 0.0),
        (0.3, 0.0, 0.0),
        (0.3, 0.0, 0.0),
    ]
}
