//! T-DOM: a tag taxonomy for deformable object manipulation.
//!
//! Tasks are annotated in a small line-oriented language, checked against
//! tag-level consistency rules, lowered into two coarser manipulation
//! taxonomies, and compared through segmentation and action-ID clustering.
//! Bending levels can be computed from curve geometry or cloth keypoints.

pub mod bend;
pub mod canonical;
pub mod cluster;
pub mod diagnostic;
pub mod lang;
pub mod project;
pub mod segment;
pub mod taxonomy;
pub mod validate;
pub mod view;

pub use canonical::load_canonical;
pub use diagnostic::{Diagnostic, Severity, SourceSpan};
pub use lang::{emit_dataset, parse_dataset};
pub use taxonomy::{
    Action, ActionCode, AgentContactTag, ArmSide, BendLevel, Dataset, Deformation, DeformationSet,
    EnvContactTag, GraspTag, MotionTag, ObjectDim, PerArm, SlidingSlots, SlidingTag, Task, Version,
};
pub use view::TaxonomyView;
