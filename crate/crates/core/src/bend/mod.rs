//! Structured and unstructured bending levels.
//!
//! 1D objects are polylines: loops (crossings that move I removes) give the
//! structured level and crossings that survive simplification give the
//! unstructured level through a configurable bucket map. 2D objects are
//! described declaratively by g-folds and keypoint accessibility.

mod buckets;
mod cloth;
mod crossing;
mod diagram;
mod polyline;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::taxonomy::BendLevel;

pub use buckets::{Bucket, BucketMap};
pub use cloth::{assess_2d, ClothState, Keypoint};
pub use crossing::{project_and_cross, Crossing, Projection};
pub use diagram::{simplify, CrossingDiagram, GaussCode, SimplifyStats, Visit};
pub use polyline::Polyline3D;

pub type Vec3 = [f64; 3];

/// Meters. Desk-scale inputs leave ample double-precision headroom.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum BendError {
    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),
    #[error("projection direction {0:?} is not a usable vector")]
    InvalidDirection(Vec3),
    #[error("degenerate projection: {0}")]
    DegenerateProjection(String),
    #[error("invalid Gauss sequence: {0}")]
    InvalidGauss(String),
    #[error("invalid bucket map: {0}")]
    BucketMap(String),
    #[error("cloth state has no keypoints")]
    NoKeypoints,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BendingAssessment {
    pub structured: BendLevel,
    pub unstructured: BendLevel,
    pub raw_removed_crossings: usize,
    pub raw_irreducible_crossings: usize,
}

impl fmt::Display for BendingAssessment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "S: {} | US: {} (removed crossings {}, irreducible crossings {})",
            self.structured,
            self.unstructured,
            self.raw_removed_crossings,
            self.raw_irreducible_crossings
        )
    }
}

pub fn assess_1d(polyline: &Polyline3D, direction: Vec3) -> Result<BendingAssessment, BendError> {
    assess_1d_with(polyline, direction, &BucketMap::default())
}

pub fn assess_1d_with(
    polyline: &Polyline3D,
    direction: Vec3,
    buckets: &BucketMap,
) -> Result<BendingAssessment, BendError> {
    let diagram = project_and_cross(polyline, direction)?;
    let (reduced, stats) = diagram.simplify_with_stats();
    let irreducible = reduced.crossings.len();
    let structured = if stats.loop_crossings > 0 {
        BendLevel::Level(stats.loop_crossings as u32)
    } else if polyline.is_straight() {
        BendLevel::None
    } else {
        BendLevel::Level(0)
    };
    let unstructured = match buckets.level(irreducible) {
        Some(k) => BendLevel::Level(k),
        None if stats.tangle_crossings > 0 => BendLevel::Level(0),
        None => BendLevel::None,
    };
    Ok(BendingAssessment {
        structured,
        unstructured,
        raw_removed_crossings: stats.removed(),
        raw_irreducible_crossings: irreducible,
    })
}
