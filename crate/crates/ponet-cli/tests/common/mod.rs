//! Seeded random generators shared by the acceptance tests.

use ponet::kb::{AverageKb, WeightedFormula};
use ponet::logic::{Clause, Formula, Literal, Scope};
use ponet::measure::{Degree, DistKind, WorldDistribution};
use ponet::network::{ConditionalCell, NetworkNode, ParentInstantiation, PossibilisticNetwork};
use ponet::transform::{LocalKb, LocalKbSet};
use ponet::{FuzzyCell, FuzzyNetwork, FuzzyNode, TriangularDegree};
use rand::rngs::StdRng;
use rand::Rng;

pub fn grid(steps: u32) -> Degree {
    Degree::new(f64::from(steps) / 10.0).unwrap()
}

pub fn random_grid_degree(rng: &mut StdRng) -> Degree {
    grid(rng.gen_range(0..=10))
}

fn instantiations(width: usize) -> Vec<Vec<bool>> {
    (0..(1usize << width))
        .map(|bits| {
            (0..width)
                .map(|i| bits & (1usize << (width - 1 - i)) == 0)
                .collect()
        })
        .collect()
}

/// A random DAG over `n` nodes where node `i` may only have parents among
/// the earlier nodes.
fn random_parents(rng: &mut StdRng, node: usize, max_parents: usize) -> Vec<usize> {
    let count = rng.gen_range(0..=max_parents.min(node).min(2));
    let mut available: Vec<usize> = (0..node).collect();
    let mut parents = Vec::with_capacity(count);
    for _ in 0..count {
        parents.push(available.remove(rng.gen_range(0..available.len())));
    }
    parents
}

/// A random network with grid-valued degrees where every parent
/// instantiation is normalized and necessity 1 on one value forces 0 on
/// the other. Identical rows occasionally collapse into an `else` cell.
pub fn random_valid_network(rng: &mut StdRng, max_nodes: usize) -> PossibilisticNetwork {
    let n = rng.gen_range(1..=max_nodes);
    let names: Vec<String> = (0..n).map(|i| format!("V{i}")).collect();
    let scope = Scope::from_names(&names).unwrap();
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let parents = random_parents(rng, i, 2);
        let width = parents.len();
        let mut by_value: [Vec<(Vec<bool>, Degree, Degree)>; 2] = [Vec::new(), Vec::new()];
        for assignment in instantiations(width) {
            let (pi_true, pi_false) = match rng.gen_range(0..3) {
                0 => (10, rng.gen_range(0..=10)),
                1 => (rng.gen_range(0..=10), 10),
                _ => (10, 10),
            };
            let (n_true, n_false) = loop {
                let a = rng.gen_range(0..=10);
                let b = rng.gen_range(0..=10);
                if (a == 10 && b != 0) || (b == 10 && a != 0) {
                    continue;
                }
                break (a, b);
            };
            by_value[0].push((assignment.clone(), grid(pi_true), grid(n_true)));
            by_value[1].push((assignment, grid(pi_false), grid(n_false)));
        }
        let mut cells = Vec::new();
        for (v, rows) in by_value.into_iter().enumerate() {
            let value = v == 0;
            // collapse a run of identical rows into an else cell sometimes
            let collapse = width > 0 && rng.gen_bool(0.3);
            let mut else_row: Option<(Degree, Degree)> = None;
            if collapse {
                let (_, pi, necessity) = rows[rng.gen_range(0..rows.len())];
                let covered: Vec<usize> = rows
                    .iter()
                    .enumerate()
                    .filter(|(_, (_, p, nn))| *p == pi && *nn == necessity)
                    .map(|(i, _)| i)
                    .collect();
                if covered.len() >= 2 {
                    else_row = Some((pi, necessity));
                    for (i, (assignment, p, nn)) in rows.iter().enumerate() {
                        if !covered.contains(&i) {
                            cells.push(ConditionalCell::new(
                                value,
                                ParentInstantiation::Explicit(assignment.clone()),
                                *p,
                                *nn,
                            ));
                        }
                    }
                }
            }
            match else_row {
                Some((pi, necessity)) => {
                    cells.push(ConditionalCell::new(
                        value,
                        ParentInstantiation::Else,
                        pi,
                        necessity,
                    ));
                }
                None => {
                    for (assignment, pi, necessity) in rows {
                        cells.push(ConditionalCell::new(
                            value,
                            ParentInstantiation::Explicit(assignment),
                            pi,
                            necessity,
                        ));
                    }
                }
            }
        }
        nodes.push(NetworkNode::new(i, parents, cells));
    }
    PossibilisticNetwork::new("random", scope, nodes)
}

/// A random local knowledge-base set over a random DAG. Every clause
/// mentions its node exactly once plus a subset of the parents.
pub fn random_kb_set(rng: &mut StdRng, max_nodes: usize) -> LocalKbSet {
    let n = rng.gen_range(1..=max_nodes);
    let names: Vec<String> = (0..n).map(|i| format!("V{i}")).collect();
    let scope = Scope::from_names(&names).unwrap();
    let mut kbs = Vec::with_capacity(n);
    for i in 0..n {
        let parents = random_parents(rng, i, 2);
        let mut local_vars = vec![scope.var(i).unwrap().clone()];
        for &p in &parents {
            local_vars.push(scope.var(p).unwrap().clone());
        }
        let local_scope = Scope::new(local_vars).unwrap();
        let mut kb = AverageKb::new(local_scope);
        for _ in 0..rng.gen_range(0..=4) {
            let mut literals = vec![Literal::new(0, rng.gen_bool(0.5))];
            for (slot, _) in parents.iter().enumerate() {
                if rng.gen_bool(0.5) {
                    literals.push(Literal::new(1 + slot, rng.gen_bool(0.5)));
                }
            }
            let clause = Clause::new(literals).unwrap();
            let alpha = grid(rng.gen_range(1..=10));
            let beta = random_grid_degree(rng);
            kb.insert(WeightedFormula::new(clause, alpha, beta).unwrap())
                .unwrap();
        }
        kbs.push(LocalKb {
            name: format!("S{}", scope.var(i).unwrap().name()),
            var: i,
            parents,
            kb,
        });
    }
    LocalKbSet {
        name: "random".into(),
        scope,
        kbs,
    }
}

/// A random triangle on the degree grid.
pub fn random_triangle(rng: &mut StdRng) -> TriangularDegree {
    let mut steps = [
        rng.gen_range(0..=10),
        rng.gen_range(0..=10),
        rng.gen_range(0..=10),
    ];
    steps.sort_unstable();
    TriangularDegree::new(grid(steps[0]), grid(steps[1]), grid(steps[2])).unwrap()
}

/// A random fuzzy network: a valid crisp base whose necessity entries are
/// widened into triangles around their peaks.
pub fn random_fuzzy_network(rng: &mut StdRng, max_nodes: usize) -> FuzzyNetwork {
    let base = random_valid_network(rng, max_nodes);
    let mut fuzzy = FuzzyNetwork::from_crisp(&base);
    let mut label = 0;
    for node in &mut fuzzy.nodes {
        for cell in &mut node.cells {
            let peak_steps = (cell.n.peak().value() * 10.0).round() as i64;
            let lower = (peak_steps - rng.gen_range(0..=2)).max(0) as u32;
            let upper = (peak_steps + rng.gen_range(0..=2)).min(10) as u32;
            let n =
                TriangularDegree::new(grid(lower), grid(peak_steps as u32), grid(upper)).unwrap();
            let mu = if rng.gen_bool(0.5) {
                label += 1;
                Some(format!("m{label}"))
            } else {
                None
            };
            *cell = FuzzyCell {
                value: cell.value,
                parents: cell.parents.clone(),
                pi: cell.pi,
                n,
                mu,
            };
        }
    }
    fuzzy
}

/// A random possibility distribution over the scope, grid-valued.
pub fn random_distribution(rng: &mut StdRng, scope: &Scope) -> WorldDistribution {
    let values = (0..(1usize << scope.len()))
        .map(|_| random_grid_degree(rng))
        .collect();
    WorldDistribution::new(scope.clone(), DistKind::Possibility, values).unwrap()
}

/// A random formula of bounded depth over the scope.
pub fn random_formula(rng: &mut StdRng, scope: &Scope, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..6) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::lit(rng.gen_range(0..scope.len()), rng.gen_bool(0.5)),
        };
    }
    match rng.gen_range(0..3) {
        0 => random_formula(rng, scope, depth - 1).not(),
        1 => random_formula(rng, scope, depth - 1).and(random_formula(rng, scope, depth - 1)),
        _ => random_formula(rng, scope, depth - 1).or(random_formula(rng, scope, depth - 1)),
    }
}

/// A random knowledge base over a fixed scope (criterion-style: up to
/// `max_clauses` clauses over up to four variables).
pub fn random_kb(rng: &mut StdRng, scope: &Scope, max_clauses: usize) -> AverageKb {
    let mut kb = AverageKb::new(scope.clone());
    for _ in 0..rng.gen_range(0..=max_clauses) {
        let count = rng.gen_range(1..=scope.len());
        let mut vars: Vec<usize> = (0..scope.len()).collect();
        let mut literals = Vec::with_capacity(count);
        for _ in 0..count {
            let v = vars.remove(rng.gen_range(0..vars.len()));
            literals.push(Literal::new(v, rng.gen_bool(0.5)));
        }
        let clause = Clause::new(literals).unwrap();
        let alpha = grid(rng.gen_range(1..=10));
        let beta = random_grid_degree(rng);
        kb.insert(WeightedFormula::new(clause, alpha, beta).unwrap())
            .unwrap();
    }
    kb
}
