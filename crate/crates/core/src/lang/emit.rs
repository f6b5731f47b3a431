use std::fmt::Write;

use crate::taxonomy::{ActionCode, Dataset, Version};

use super::lexer::quote;

/// `M: G N | G: N N | NPE: R | ...`, the code tail of an action line.
pub fn code_text(code: &ActionCode) -> String {
    format!(
        "M: {} {} | G: {} {} | NPE: {} | NPA: {} {} | CS: {} {} {} | D: {} | S: {} | US: {}",
        code.motion.left,
        code.motion.right,
        code.grasp.left,
        code.grasp.right,
        code.env,
        code.agent.left,
        code.agent.right,
        code.sliding.env,
        code.sliding.left,
        code.sliding.right,
        code.deformation,
        code.structured,
        code.unstructured,
    )
}

/// Canonical text form. The version header is written only when it differs
/// from the default, so a one-task one-action dataset is three lines.
pub fn emit_dataset(dataset: &Dataset) -> String {
    let mut out = String::new();
    if dataset.version != Version::default() {
        let _ = writeln!(out, "tdom-version {}", dataset.version);
    }
    for (i, task) in dataset.tasks.iter().enumerate() {
        if i > 0 || dataset.version != Version::default() {
            out.push('\n');
        }
        let _ = writeln!(out, "task {} id {}", quote(&task.name), task.id);
        let _ = writeln!(
            out,
            "object {} dim {}",
            quote(&task.object),
            task.object_dim
        );
        for action in &task.actions {
            let _ = writeln!(
                out,
                "action {} {} {}",
                action.id,
                quote(&action.verb),
                code_text(&action.code)
            );
        }
    }
    out
}
