//! Renderers for the three file dialects. Output parses back to a
//! structurally equal document; nodes are written in scope order.

use super::joint::format_degree;
use crate::fuzzy::{FuzzyCell, FuzzyNetwork};
use crate::logic::Scope;
use crate::network::{ConditionalCell, ParentInstantiation, PossibilisticNetwork};
use crate::transform::LocalKbSet;

fn push_header(out: &mut String, keyword: &str, name: &str) {
    out.push_str(keyword);
    out.push(' ');
    out.push_str(name);
    out.push('\n');
}

fn push_vars(out: &mut String, scope: &Scope) {
    out.push('\n');
    for var in scope.vars() {
        out.push_str("var ");
        out.push_str(var.name());
        out.push('\n');
    }
}

fn push_parents<'a>(
    out: &mut String,
    scope: &Scope,
    nodes: impl Iterator<Item = (usize, &'a [usize])>,
) {
    let mut any = false;
    for (var, parents) in nodes {
        if parents.is_empty() {
            continue;
        }
        if !any {
            out.push('\n');
            any = true;
        }
        out.push_str("parents ");
        out.push_str(scope.var(var).unwrap().name());
        out.push_str(":");
        for &p in parents {
            out.push(' ');
            out.push_str(scope.var(p).unwrap().name());
        }
        out.push('\n');
    }
}

fn push_cell_prefix(
    out: &mut String,
    scope: &Scope,
    var: usize,
    parents: &[usize],
    value: bool,
    instantiation: &ParentInstantiation,
) {
    out.push_str("cell ");
    out.push_str(scope.var(var).unwrap().name());
    out.push_str(": ");
    out.push_str(scope.var(var).unwrap().label(value));
    match instantiation {
        ParentInstantiation::Else => out.push_str(" | else"),
        ParentInstantiation::Explicit(vs) if vs.is_empty() => {}
        ParentInstantiation::Explicit(vs) => {
            out.push_str(" |");
            for (&v, &p) in vs.iter().zip(parents) {
                out.push(' ');
                out.push_str(scope.var(p).unwrap().label(v));
            }
        }
    }
}

pub fn render_network(net: &PossibilisticNetwork) -> String {
    let mut out = String::new();
    push_header(&mut out, "network", &net.name);
    push_vars(&mut out, &net.scope);
    push_parents(
        &mut out,
        &net.scope,
        (0..net.scope.len()).filter_map(|i| {
            net.node_for_var(i).map(|n| (i, n.parents.as_slice()))
        }),
    );
    for i in 0..net.scope.len() {
        let Some(node) = net.node_for_var(i) else {
            continue;
        };
        if node.cells.is_empty() {
            continue;
        }
        out.push('\n');
        for ConditionalCell {
            value,
            parents,
            pi,
            n,
        } in &node.cells
        {
            push_cell_prefix(&mut out, &net.scope, node.var, &node.parents, *value, parents);
            out.push_str(" pi=");
            out.push_str(&format_degree(pi.value()));
            out.push_str(" n=");
            out.push_str(&format_degree(n.value()));
            out.push('\n');
        }
    }
    out
}

pub fn render_fuzzy(net: &FuzzyNetwork) -> String {
    let mut out = String::new();
    push_header(&mut out, "fuzzy", &net.name);
    push_vars(&mut out, &net.scope);
    push_parents(
        &mut out,
        &net.scope,
        (0..net.scope.len()).filter_map(|i| {
            net.nodes
                .iter()
                .find(|n| n.var == i)
                .map(|n| (i, n.parents.as_slice()))
        }),
    );
    for i in 0..net.scope.len() {
        let Some(node) = net.nodes.iter().find(|n| n.var == i) else {
            continue;
        };
        if node.cells.is_empty() {
            continue;
        }
        out.push('\n');
        for FuzzyCell {
            value,
            parents,
            pi,
            n,
            mu,
        } in &node.cells
        {
            push_cell_prefix(&mut out, &net.scope, node.var, &node.parents, *value, parents);
            out.push_str(" pi=");
            out.push_str(&format_degree(pi.value()));
            out.push_str(" n=");
            if n.is_crisp() {
                out.push_str(&format_degree(n.peak().value()));
            } else {
                out.push_str(&format!(
                    "{}/{}/{}",
                    format_degree(n.lower().value()),
                    format_degree(n.peak().value()),
                    format_degree(n.upper().value())
                ));
            }
            if let Some(mu) = mu {
                out.push_str(" mu=");
                out.push_str(mu);
            }
            out.push('\n');
        }
    }
    out
}

pub fn render_kb_set(kbs: &LocalKbSet) -> String {
    let mut out = String::new();
    push_header(&mut out, "kbset", &kbs.name);
    push_vars(&mut out, &kbs.scope);
    push_parents(
        &mut out,
        &kbs.scope,
        (0..kbs.scope.len()).filter_map(|i| {
            kbs.kb_for_var(i).map(|k| (i, k.parents.as_slice()))
        }),
    );
    for i in 0..kbs.scope.len() {
        let Some(local) = kbs.kb_for_var(i) else {
            continue;
        };
        out.push('\n');
        out.push_str("kb ");
        out.push_str(&local.name);
        out.push_str(" for ");
        out.push_str(kbs.scope.var(i).unwrap().name());
        out.push('\n');
        for f in local.kb.formulas() {
            out.push_str("clause ");
            out.push_str(&f.clause().display(local.kb.scope()).to_string());
            out.push_str(" alpha=");
            out.push_str(&format_degree(f.alpha().value()));
            out.push_str(" beta=");
            out.push_str(&format_degree(f.beta().value()));
            out.push('\n');
        }
    }
    out
}
