use std::collections::BTreeSet;

use super::{BendError, BendingAssessment};
use crate::taxonomy::BendLevel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Keypoint {
    pub name: String,
    pub accessible: bool,
}

/// Caller-supplied description of a 2D object: which keypoints (corners,
/// edge midpoints) can be reached, and how it is folded.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClothState {
    pub keypoints: Vec<Keypoint>,
    pub gfolds: u32,
    pub wrinkled: bool,
    pub in_transition_bend: bool,
}

impl ClothState {
    pub fn accessible_count(&self) -> usize {
        self.keypoints.iter().filter(|k| k.accessible).count()
    }

    /// Line format:
    ///
    /// ```text
    /// keypoint corner-a accessible
    /// keypoint corner-b occluded
    /// gfolds 1
    /// wrinkled true
    /// transition false
    /// ```
    pub fn parse(text: &str) -> Result<ClothState, BendError> {
        let mut state = ClothState::default();
        let mut names = BTreeSet::new();
        let mut set = BTreeSet::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| BendError::Parse {
                line: no + 1,
                message,
            };
            let words: Vec<&str> = line.split_whitespace().collect();
            let flag = |w: &str| match w {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(err(format!("expected true or false, found `{w}`"))),
            };
            match words.as_slice() {
                ["keypoint", name, access] => {
                    let accessible = match *access {
                        "accessible" => true,
                        "occluded" => false,
                        other => {
                            return Err(err(format!(
                                "expected accessible or occluded, found `{other}`"
                            )))
                        }
                    };
                    if !names.insert(name.to_string()) {
                        return Err(err(format!("keypoint `{name}` listed twice")));
                    }
                    state.keypoints.push(Keypoint {
                        name: name.to_string(),
                        accessible,
                    });
                }
                [key @ ("gfolds" | "wrinkled" | "transition"), value] => {
                    if !set.insert(*key) {
                        return Err(err(format!("`{key}` given twice")));
                    }
                    match *key {
                        "gfolds" => {
                            state.gfolds = value.parse().map_err(|_| {
                                err(format!(
                                    "g-fold count must be a non-negative integer, found `{value}`"
                                ))
                            })?
                        }
                        "wrinkled" => state.wrinkled = flag(value)?,
                        _ => state.in_transition_bend = flag(value)?,
                    }
                }
                _ => return Err(err(format!("unrecognised line `{line}`"))),
            }
        }
        Ok(state)
    }
}

/// Structured level from g-folds, unstructured level from keypoints that
/// cannot be reached.
pub fn assess_2d(state: &ClothState) -> Result<BendingAssessment, BendError> {
    if state.keypoints.is_empty() {
        return Err(BendError::NoKeypoints);
    }
    let structured = if state.gfolds >= 1 {
        BendLevel::Level(state.gfolds)
    } else if state.in_transition_bend {
        BendLevel::Level(0)
    } else {
        BendLevel::None
    };
    let hidden = state.keypoints.len() - state.accessible_count();
    let unstructured = if state.wrinkled || hidden > 0 {
        BendLevel::Level(hidden as u32)
    } else {
        BendLevel::None
    };
    Ok(BendingAssessment {
        structured,
        unstructured,
        raw_removed_crossings: 0,
        raw_irreducible_crossings: 0,
    })
}
