//! Joint-table rendering and the shared degree formatting rule.

use crate::logic::enumerate_worlds;
use crate::network::{NetworkError, PossibilisticNetwork};

/// Output shape for [`render_joint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointFormat {
    /// Column-aligned, human-oriented.
    Table,
    /// Comma-separated with a header row, `.` decimal separator, LF line
    /// endings, no padding.
    Csv,
}

/// Formats a degree with up to six significant digits and trailing zeros
/// trimmed, so `0.2` stays `0.2` and `1` stays `1`.
pub fn format_degree(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let mut s = format!("{value:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Renders the full joint of a network, one row per world in enumeration
/// order: the world's literal labels, then min possibility, min necessity,
/// and their product.
pub fn render_joint(
    net: &PossibilisticNetwork,
    format: JointFormat,
) -> Result<String, NetworkError> {
    let worlds = enumerate_worlds(&net.scope)?;
    let mut header: Vec<String> = net
        .scope
        .vars()
        .iter()
        .map(|v| v.name().to_string())
        .collect();
    header.extend(["min_pi".to_string(), "min_n".to_string(), "avg".to_string()]);
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(worlds.len());
    for world in &worlds {
        let joint = net.joint_average(world)?;
        let mut row: Vec<String> = world
            .labels(&net.scope)
            .into_iter()
            .map(str::to_string)
            .collect();
        row.push(format_degree(joint.min_pi.value()));
        row.push(format_degree(joint.min_n.value()));
        row.push(format_degree(joint.average.value()));
        rows.push(row);
    }
    let text = match format {
        JointFormat::Csv => {
            let mut out = header.join(",");
            out.push('\n');
            for row in &rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        JointFormat::Table => {
            let mut widths: Vec<usize> = header.iter().map(String::len).collect();
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let mut out = String::new();
            for line_cells in std::iter::once(&header).chain(rows.iter()) {
                let mut line = String::new();
                for (i, (cell, width)) in line_cells.iter().zip(&widths).enumerate() {
                    if i > 0 {
                        line.push_str("  ");
                    }
                    line.push_str(cell);
                    if i + 1 < line_cells.len() {
                        for _ in cell.len()..*width {
                            line.push(' ');
                        }
                    }
                }
                out.push_str(line.trim_end());
                out.push('\n');
            }
            out
        }
    };
    Ok(text)
}
