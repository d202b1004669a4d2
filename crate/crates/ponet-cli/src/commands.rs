//! Command implementations. Each returns the process exit code: 0 for
//! success or "true", 1 for "false", 2 for input errors, 3 for constraint
//! violations.

use crate::{Measure, OutputFormat};
use ponet::format::{
    parse_formula, parse_fuzzy, parse_kb_set, parse_network, render_joint, render_kb_set,
    render_network, DeclRef, Document, JointFormat, ParseError,
};
use ponet::network::{PossibilisticNetwork, QueryMeasure, ValidationReport};
use ponet::transform::{kb_to_network, network_to_kb, roundtrip_report, TransformError};
use ponet::LocalKbSet;
use std::fs;
use std::path::Path;

const OK: u8 = 0;
const FALSE: u8 = 1;
const INPUT_ERROR: u8 = 2;
const CONSTRAINT_VIOLATION: u8 = 3;

fn read(path: &Path) -> Result<String, u8> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        INPUT_ERROR
    })
}

fn report_parse_errors(errors: &[ParseError]) -> u8 {
    for e in errors {
        eprintln!("error: {e}");
    }
    INPUT_ERROR
}

fn file_name(path: &Path) -> String {
    path.display().to_string()
}

fn load_network(path: &Path) -> Result<(Document, PossibilisticNetwork), u8> {
    let text = read(path)?;
    let doc = parse_network(&text, &file_name(path)).map_err(|e| report_parse_errors(&e))?;
    let net = doc.as_network().cloned().expect("network dialect");
    Ok((doc, net))
}

fn load_kb_set(path: &Path) -> Result<LocalKbSet, u8> {
    let text = read(path)?;
    let doc = parse_kb_set(&text, &file_name(path)).map_err(|e| report_parse_errors(&e))?;
    Ok(doc.as_kb_set().cloned().expect("kbset dialect"))
}

fn write_out(out: Option<&Path>, content: &str) -> u8 {
    match out {
        None => {
            print!("{content}");
            OK
        }
        Some(path) => match fs::write(path, content) {
            Ok(()) => OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                INPUT_ERROR
            }
        },
    }
}

fn report_issues(doc: Option<&Document>, report: &ValidationReport) {
    for issue in report.issues() {
        let label = match issue.severity() {
            ponet::network::Severity::Error => "error",
            ponet::network::Severity::Warning => "warning",
        };
        // point at the var declaration of the offending node when we can
        let span = doc.and_then(|d| {
            let node = match issue {
                ponet::ValidationIssue::NonTotalTable { node, .. }
                | ponet::ValidationIssue::OverlappingCells { node, .. }
                | ponet::ValidationIssue::DuplicateElse { node, .. }
                | ponet::ValidationIssue::NormalizationViolation { node, .. }
                | ponet::ValidationIssue::NecessityConflict { node, .. }
                | ponet::ValidationIssue::DanglingParent { node, .. }
                | ponet::ValidationIssue::DuplicateParent { node, .. } => Some(node.clone()),
                ponet::ValidationIssue::MissingNode { variable }
                | ponet::ValidationIssue::DuplicateNode { variable } => Some(variable.clone()),
                _ => None,
            }?;
            d.span_of(&DeclRef::Var(node))
        });
        match span {
            Some(span) => eprintln!("{span}: {label}: {issue}"),
            None => eprintln!("{label}: {issue}"),
        }
    }
}

/// Prints every issue; fails only on error-severity ones.
fn require_valid(doc: &Document, net: &PossibilisticNetwork) -> Result<(), u8> {
    let report = net.validate();
    report_issues(Some(doc), &report);
    if report.is_valid() {
        Ok(())
    } else {
        Err(CONSTRAINT_VIOLATION)
    }
}

pub fn validate(path: &Path) -> u8 {
    let extension = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    match extension {
        "pnet" => {
            let Ok((doc, net)) = load_network(path) else {
                return INPUT_ERROR;
            };
            match require_valid(&doc, &net) {
                Ok(()) => {
                    eprintln!("{}: valid", path.display());
                    OK
                }
                Err(code) => code,
            }
        }
        "pkb" => match load_kb_set(path) {
            Ok(_) => {
                eprintln!("{}: valid", path.display());
                OK
            }
            Err(code) => code,
        },
        "pfnet" => {
            let Ok(text) = read(path) else {
                return INPUT_ERROR;
            };
            let doc = match parse_fuzzy(&text, &file_name(path)) {
                Ok(doc) => doc,
                Err(errors) => return report_parse_errors(&errors),
            };
            let report = doc.as_fuzzy().unwrap().validate();
            report_issues(Some(&doc), &report);
            if report.is_valid() {
                eprintln!("{}: valid", path.display());
                OK
            } else {
                CONSTRAINT_VIOLATION
            }
        }
        other => {
            eprintln!("error: unknown file extension `{other}` (expected pnet, pkb, or pfnet)");
            INPUT_ERROR
        }
    }
}

pub fn joint(path: &Path, format: OutputFormat) -> u8 {
    let Ok((doc, net)) = load_network(path) else {
        return INPUT_ERROR;
    };
    if let Err(code) = require_valid(&doc, &net) {
        return code;
    }
    let format = match format {
        OutputFormat::Table => JointFormat::Table,
        OutputFormat::Csv => JointFormat::Csv,
    };
    match render_joint(&net, format) {
        Ok(text) => {
            let table = net.joint_table().expect("validated network");
            if !table.possibility.is_normalized() {
                eprintln!(
                    "note: joint possibility is subnormalized (max {})",
                    ponet::format::format_degree(table.possibility.max().value())
                );
            }
            print!("{text}");
            OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            INPUT_ERROR
        }
    }
}

pub fn query(path: &Path, formula: &str, measure: Measure) -> u8 {
    let Ok((doc, net)) = load_network(path) else {
        return INPUT_ERROR;
    };
    if let Err(code) = require_valid(&doc, &net) {
        return code;
    }
    let formula = match parse_formula(formula, &net.scope) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: in --formula: {e}");
            return INPUT_ERROR;
        }
    };
    let measure = match measure {
        Measure::Pi => QueryMeasure::Possibility,
        Measure::Ndual => QueryMeasure::NecessityDual,
        Measure::Avg => QueryMeasure::Average,
    };
    match net.query(&formula, measure) {
        Ok(degree) => {
            println!("{}", ponet::format::format_degree(degree.value()));
            OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            INPUT_ERROR
        }
    }
}

pub fn to_kb(path: &Path, out: Option<&Path>) -> u8 {
    let Ok((doc, net)) = load_network(path) else {
        return INPUT_ERROR;
    };
    match network_to_kb(&net) {
        Ok(kbs) => write_out(out, &render_kb_set(&kbs)),
        Err(TransformError::InvalidInput(report)) => {
            report_issues(Some(&doc), &report);
            CONSTRAINT_VIOLATION
        }
        Err(e) => {
            eprintln!("error: {e}");
            INPUT_ERROR
        }
    }
}

pub fn from_kb(path: &Path, out: Option<&Path>) -> u8 {
    let Ok(kbs) = load_kb_set(path) else {
        return INPUT_ERROR;
    };
    match kb_to_network(&kbs) {
        Ok(recovered) => {
            let code = write_out(out, &render_network(&recovered.network));
            if code != OK {
                return code;
            }
            report_issues(None, &recovered.issues);
            if recovered.issues.is_valid() {
                OK
            } else {
                CONSTRAINT_VIOLATION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            INPUT_ERROR
        }
    }
}

pub fn roundtrip(path: &Path) -> u8 {
    let Ok((doc, net)) = load_network(path) else {
        return INPUT_ERROR;
    };
    if let Err(code) = require_valid(&doc, &net) {
        return code;
    }
    match roundtrip_report(&net) {
        Ok(report) => {
            println!("{report}");
            if report.all_pi_match() {
                OK
            } else {
                CONSTRAINT_VIOLATION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            INPUT_ERROR
        }
    }
}

pub fn equiv(first: &Path, second: &Path) -> u8 {
    let (Ok(a), Ok(b)) = (load_kb_set(first), load_kb_set(second)) else {
        return INPUT_ERROR;
    };
    if a.scope != b.scope {
        eprintln!("error: the two sets declare different variables");
        return INPUT_ERROR;
    }
    for local in &a.kbs {
        let Some(other) = b.kb_for_var(local.var) else {
            eprintln!("error: the two sets declare different variables");
            return INPUT_ERROR;
        };
        if local.parents != other.parents {
            eprintln!("error: node parent structures differ");
            return INPUT_ERROR;
        }
        match local.kb.equivalent(&other.kb) {
            Ok(true) => {}
            Ok(false) => {
                println!("not equivalent");
                return FALSE;
            }
            Err(e) => {
                eprintln!("error: {e}");
                return INPUT_ERROR;
            }
        }
    }
    println!("equivalent");
    OK
}

pub fn normalize(path: &Path, out: Option<&Path>) -> u8 {
    let Ok(mut kbs) = load_kb_set(path) else {
        return INPUT_ERROR;
    };
    for local in &mut kbs.kbs {
        match local.kb.normalized() {
            Ok(kb) => local.kb = kb,
            Err(e) => {
                eprintln!("error: {e}");
                return INPUT_ERROR;
            }
        }
    }
    write_out(out, &render_kb_set(&kbs))
}

pub fn defuzzify(path: &Path, out: Option<&Path>) -> u8 {
    let Ok(text) = read(path) else {
        return INPUT_ERROR;
    };
    let doc = match parse_fuzzy(&text, &file_name(path)) {
        Ok(doc) => doc,
        Err(errors) => return report_parse_errors(&errors),
    };
    let fuzzy = doc.as_fuzzy().unwrap();
    match fuzzy.defuzzified() {
        Ok((network, issues)) => {
            let code = write_out(out, &render_network(&network));
            if code != OK {
                return code;
            }
            report_issues(Some(&doc), &issues);
            if issues.is_valid() {
                OK
            } else {
                CONSTRAINT_VIOLATION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            CONSTRAINT_VIOLATION
        }
    }
}
