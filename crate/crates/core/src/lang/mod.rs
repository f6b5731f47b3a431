//! The `.tdom` annotation language: one statement per line.
//!
//! ```text
//! tdom-version 1.0
//! task "Fold towel" id T1
//! object "towel" dim 2D
//! action T1-3 "grasp" M: N N | G: P N | NPE: R | NPA: N N | CS: N N N | D: C | S: L1 | US: N
//! ```
//!
//! `#` starts a comment. Blank lines and trailing whitespace are ignored;
//! CRLF input is accepted and LF is emitted.

mod emit;
mod json;
mod lexer;
mod parser;

use std::collections::HashSet;

use crate::diagnostic::Diagnostic;
use crate::diagnostic::Severity;
use crate::taxonomy::Dataset;

pub use emit::{code_text, emit_dataset};
pub use json::{from_json, to_json};
pub use parser::{parse_dataset, parse_with_source_map, SourceMap};

/// Stable diagnostic rule identifiers produced by the front end.
pub mod rules {
    pub const EMPTY_DATASET: &str = "empty-dataset";
    pub const SYNTAX: &str = "syntax";
    pub const UNTERMINATED_STRING: &str = "unterminated-string";
    pub const BAD_VERSION: &str = "bad-version";
    pub const UNKNOWN_TAG: &str = "unknown-tag";
    pub const UNKNOWN_FIELD: &str = "unknown-field";
    pub const MISSING_FIELD: &str = "missing-field";
    pub const ARITY: &str = "arity";
    pub const DUPLICATE_ID: &str = "duplicate-id";
    pub const ID_PREFIX: &str = "id-prefix";
    pub const EMPTY_TASK: &str = "empty-task";
    pub const BAD_NAME: &str = "bad-name";
    pub const JSON: &str = "json";
}

/// Field labels of an action code, in order, with their arity.
pub(crate) const FIELDS: [(&str, usize); 8] = [
    ("M", 2),
    ("G", 2),
    ("NPE", 1),
    ("NPA", 2),
    ("CS", 3),
    ("D", 1),
    ("S", 1),
    ("US", 1),
];

pub(crate) fn is_ident(text: &str) -> bool {
    !text.is_empty()
        && text
            .chars()
            .all(|c| c.is_alphanumeric() || c == '-' || c == '_' || c == '.')
        && !text.ends_with(':')
}

fn structural(message: String, rule: &str) -> Diagnostic {
    Diagnostic {
        severity: Severity::Error,
        rule: rule.to_string(),
        message,
        span: None,
        subject: None,
    }
}

/// Structural invariants that the text parser enforces by construction.
/// Datasets built in memory or loaded from JSON are checked with this
/// before they are emitted as text.
pub fn check_structure(dataset: &Dataset) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    if dataset.tasks.is_empty() {
        diags.push(structural("empty dataset".into(), rules::EMPTY_DATASET));
    }
    let mut task_ids = HashSet::new();
    let mut action_ids = HashSet::new();
    for task in &dataset.tasks {
        if !is_ident(&task.id) {
            diags.push(structural(
                format!("invalid task id `{}`", task.id),
                rules::SYNTAX,
            ));
        }
        if !task_ids.insert(task.id.as_str()) {
            diags.push(structural(
                format!("duplicate task id `{}`", task.id),
                rules::DUPLICATE_ID,
            ));
        }
        for text in [&task.name, &task.object] {
            if text.contains(['\n', '\r']) {
                diags.push(structural(
                    format!("task `{}`: names must be single-line", task.id),
                    rules::BAD_NAME,
                ));
            }
        }
        if task.actions.is_empty() {
            diags.push(structural(
                format!("task `{}` has no actions", task.id),
                rules::EMPTY_TASK,
            ));
        }
        let prefix = format!("{}-", task.id);
        for action in &task.actions {
            let mut d = Vec::new();
            if !is_ident(&action.id) {
                d.push(structural(
                    format!("invalid action id `{}`", action.id),
                    rules::SYNTAX,
                ));
            }
            if !action.id.starts_with(&prefix) || action.id.len() == prefix.len() {
                d.push(structural(
                    format!("action id `{}` must start with `{prefix}`", action.id),
                    rules::ID_PREFIX,
                ));
            }
            if !action_ids.insert(action.id.as_str()) {
                d.push(structural(
                    format!("duplicate action id `{}`", action.id),
                    rules::DUPLICATE_ID,
                ));
            }
            if action.verb.trim().is_empty() || action.verb.contains(['\n', '\r']) {
                d.push(structural(
                    format!(
                        "action `{}`: verb must be non-empty and single-line",
                        action.id
                    ),
                    rules::BAD_NAME,
                ));
            }
            for diag in &mut d {
                diag.subject = Some(action.id.clone());
            }
            diags.extend(d);
        }
    }
    diags
}
