//! The bundled ten-task annotation corpus.

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diagnostic::Diagnostic;
use crate::lang::parse_dataset;
use crate::taxonomy::Dataset;

const TEXT: &str = include_str!("../data/canonical.tdom");

/// SHA-256 of `data/canonical.tdom`.
pub const CHECKSUM: &str = "506ab93cbbb9f9fea7635dc5e8493fd1b6b6afb66d784b2492d5f4a0584d2562";

pub const PROVENANCE: &str = "T-DOM deformable object manipulation dataset: \
    tag transcription of the ten recorded tasks (RGB-D recordings not bundled)";

/// Per-task action counts, in task order.
pub const TASK_SIZES: [usize; 10] = [6, 7, 5, 3, 7, 5, 2, 4, 10, 11];

#[derive(Debug, Error)]
pub enum CanonicalError {
    #[error("canonical corpus checksum mismatch: expected {expected}, found {found}")]
    ChecksumMismatch { expected: String, found: String },
    #[error("canonical corpus failed to parse ({} diagnostics)", .0.len())]
    Parse(Vec<Diagnostic>),
}

#[derive(Debug, Clone, Copy)]
pub struct CanonicalCorpus {
    pub text: &'static str,
    pub checksum: &'static str,
    pub provenance: &'static str,
}

pub fn corpus() -> CanonicalCorpus {
    CanonicalCorpus {
        text: TEXT,
        checksum: CHECKSUM,
        provenance: PROVENANCE,
    }
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Verifies `text` against `expected` and parses it.
pub fn load_verified(text: &str, expected: &str) -> Result<Dataset, CanonicalError> {
    let found = sha256_hex(text);
    if found != expected {
        return Err(CanonicalError::ChecksumMismatch {
            expected: expected.to_string(),
            found,
        });
    }
    parse_dataset(text).map_err(CanonicalError::Parse)
}

pub fn load_canonical() -> Result<Dataset, CanonicalError> {
    load_verified(TEXT, CHECKSUM)
}
