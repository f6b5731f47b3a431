use crate::diagnostic::{Diagnostic, Severity, SourceSpan};
use crate::taxonomy::Dataset;

use super::{check_structure, rules};

/// JSON mirror of the in-memory model, with the same field names.
pub fn to_json(dataset: &Dataset) -> String {
    serde_json::to_string_pretty(dataset).expect("dataset serialization is infallible")
}

pub fn from_json(text: &str) -> Result<Dataset, Vec<Diagnostic>> {
    let dataset: Dataset = serde_json::from_str(text).map_err(|e| {
        vec![Diagnostic {
            severity: Severity::Error,
            rule: rules::JSON.to_string(),
            message: e.to_string(),
            span: (e.line() > 0).then(|| SourceSpan::new(e.line(), e.column().max(1), 1)),
            subject: None,
        }]
    })?;
    let problems = check_structure(&dataset);
    if problems.is_empty() {
        Ok(dataset)
    } else {
        Err(problems)
    }
}
