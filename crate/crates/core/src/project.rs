//! Lowering of action codes into the Bullock and Paulius tag spaces.
//!
//! Both projections are total functions of the code (plus one per-task flag
//! for Paulius), so any partition they induce is coarser than the one
//! induced by the full code.

use std::fmt;

use crate::taxonomy::{ActionCode, ArmSide, PerArm, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BullockContact {
    ContactPrehensile,
    ContactNonPrehensile,
    NoContact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BullockMotion {
    /// Never produced from T-DOM codes: there is no in-hand motion tag.
    WithinHand,
    NotWithinHand,
    NoMotion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BullockSlippage {
    MotionAtContact,
    NoMotionAtContact,
    NoContactDash,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BullockArm {
    pub contact: BullockContact,
    pub motion: BullockMotion,
    pub slippage: BullockSlippage,
}

impl BullockArm {
    /// Slippage is a dash exactly when there is no contact.
    pub fn is_consistent(&self) -> bool {
        (self.slippage == BullockSlippage::NoContactDash)
            == (self.contact == BullockContact::NoContact)
    }
}

impl fmt::Display for BullockArm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let contact = match self.contact {
            BullockContact::ContactPrehensile => "C P",
            BullockContact::ContactNonPrehensile => "C NP",
            BullockContact::NoContact => "NC",
        };
        let motion = match self.motion {
            BullockMotion::WithinHand => "M W",
            BullockMotion::NotWithinHand => "M NW",
            BullockMotion::NoMotion => "NM",
        };
        let slippage = match self.slippage {
            BullockSlippage::MotionAtContact => "A",
            BullockSlippage::NoMotionAtContact => "NA",
            BullockSlippage::NoContactDash => "-",
        };
        write!(f, "{contact} | {motion} | {slippage}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BullockCode(pub PerArm<BullockArm>);

impl fmt::Display for BullockCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L[{}] R[{}]", self.0.left, self.0.right)
    }
}

fn bullock_arm(code: &ActionCode, side: ArmSide) -> BullockArm {
    // environment contact is invisible to this taxonomy
    let contact = if code.grasp.get(side).is_some() {
        BullockContact::ContactPrehensile
    } else if code.agent.get(side).is_some() {
        BullockContact::ContactNonPrehensile
    } else {
        BullockContact::NoContact
    };
    let motion = if code.motion.get(side).is_some() {
        BullockMotion::NotWithinHand
    } else {
        BullockMotion::NoMotion
    };
    let slippage = match contact {
        BullockContact::NoContact => BullockSlippage::NoContactDash,
        _ if code.sliding.arm(side).is_some() => BullockSlippage::MotionAtContact,
        _ => BullockSlippage::NoMotionAtContact,
    };
    BullockArm {
        contact,
        motion,
        slippage,
    }
}

pub fn to_bullock(code: &ActionCode) -> BullockCode {
    BullockCode(PerArm::new(
        bullock_arm(code, ArmSide::Left),
        bullock_arm(code, ArmSide::Right),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engagement {
    NoEngage,
    /// Manipulator against a rigid surface; T-DOM codes never record this.
    RigidDiscontinuous,
    SoftDiscontinuous,
    SoftContinuous,
}

impl Engagement {
    pub fn token(self) -> &'static str {
        match self {
            Engagement::NoEngage => "NE",
            Engagement::RigidDiscontinuous => "RD",
            Engagement::SoftDiscontinuous => "SD",
            Engagement::SoftContinuous => "SC",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    NoDeform,
    Temporary,
    /// Unreachable: plastic deformation is outside the taxonomy.
    Permanent,
}

impl Outcome {
    pub fn token(self) -> &'static str {
        match self {
            Outcome::NoDeform => "ND",
            Outcome::Temporary => "TEMP",
            Outcome::Permanent => "PERM",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliusCode {
    pub engagement: PerArm<Engagement>,
    pub arm_moving: PerArm<bool>,
    pub outcome: Outcome,
}

impl PauliusCode {
    /// Full code including arm motion; used for clustering.
    pub fn cluster_key(&self) -> String {
        let mv = |m: bool| if m { "M" } else { "NM" };
        format!(
            "L[{} {}] R[{} {}] {}",
            self.engagement.left.token(),
            mv(self.arm_moving.left),
            self.engagement.right.token(),
            mv(self.arm_moving.right),
            self.outcome.token()
        )
    }

    /// Motion dropped: continuous contact does not segment on robot motion.
    pub fn segment_key(&self) -> String {
        format!(
            "L[{}] R[{}] {}",
            self.engagement.left.token(),
            self.engagement.right.token(),
            self.outcome.token()
        )
    }
}

impl fmt::Display for PauliusCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cluster_key())
    }
}

pub fn to_paulius(code: &ActionCode, any_deformable_contact: bool) -> PauliusCode {
    let engagement = |side: ArmSide| {
        if code.grasp.get(side).is_some() {
            Engagement::SoftContinuous
        } else if code.agent.get(side).is_some() {
            Engagement::SoftDiscontinuous
        } else {
            Engagement::NoEngage
        }
    };
    PauliusCode {
        engagement: PerArm::new(engagement(ArmSide::Left), engagement(ArmSide::Right)),
        arm_moving: code.motion.map(|m| m.is_some()),
        outcome: if any_deformable_contact {
            Outcome::Temporary
        } else {
            Outcome::NoDeform
        },
    }
}

/// Per-task context for the Paulius outcome: does any manipulator touch the
/// (deformable) object at some point in the task?
pub fn task_has_deformable_contact(task: &Task) -> bool {
    task.actions
        .iter()
        .any(|a| ArmSide::BOTH.iter().any(|s| a.code.arm_in_contact(*s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::load_canonical;
    use crate::lang::parse_dataset;

    fn code(text: &str) -> ActionCode {
        let doc = format!("task \"t\" id T1\naction T1-1 \"x\" {text}\n");
        parse_dataset(&doc).unwrap().tasks[0].actions[0].code
    }

    fn arm(
        contact: BullockContact,
        motion: BullockMotion,
        slippage: BullockSlippage,
    ) -> BullockArm {
        BullockArm {
            contact,
            motion,
            slippage,
        }
    }

    use BullockContact::*;
    use BullockMotion::*;
    use BullockSlippage::*;

    #[test]
    fn fold_is_a_grasp_in_motion() {
        let fold = code("M: GE N | G: P N | NPE: R | NPA: N N | CS: N N N | D: C | S: L2 | US: N");
        let b = to_bullock(&fold);
        assert_eq!(
            b.0.left,
            arm(ContactPrehensile, NotWithinHand, NoMotionAtContact)
        );
        assert_eq!(b.0.right, arm(NoContact, NoMotion, NoContactDash));
        assert_eq!(b.to_string(), "L[C P | M NW | NA] R[NC | NM | -]");
    }

    #[test]
    fn all_none_bullock() {
        let b = to_bullock(&ActionCode::default());
        assert_eq!(b.0.left, arm(NoContact, NoMotion, NoContactDash));
        assert_eq!(b.0.right, b.0.left);
    }

    #[test]
    fn slide_under_has_motion_at_contact() {
        let slide = code("M: G N | G: N N | NPE: R | NPA: R N | CS: N A N | D: N | S: L1 | US: N");
        let b = to_bullock(&slide);
        assert_eq!(
            b.0.left,
            arm(ContactNonPrehensile, NotWithinHand, MotionAtContact)
        );
        assert_eq!(b.0.right, arm(NoContact, NoMotion, NoContactDash));
    }

    #[test]
    fn tracing_static_paulius() {
        let tracing =
            code("M: GE N | G: P P | NPE: R | NPA: N N | CS: N N P | D: TN | S: L0 | US: L2");
        let p = to_paulius(&tracing, true);
        assert_eq!(
            p.engagement,
            PerArm::new(Engagement::SoftContinuous, Engagement::SoftContinuous)
        );
        assert_eq!(p.arm_moving, PerArm::new(true, false));
        assert_eq!(p.outcome, Outcome::Temporary);
    }

    #[test]
    fn all_none_paulius() {
        let p = to_paulius(&ActionCode::default(), false);
        assert_eq!(
            p.engagement,
            PerArm::new(Engagement::NoEngage, Engagement::NoEngage)
        );
        assert_eq!(p.arm_moving, PerArm::new(false, false));
        assert_eq!(p.outcome, Outcome::NoDeform);
    }

    #[test]
    fn line_grasp_and_elastic_motion_project_like_point_and_motion() {
        let line = code("M: E N | G: L N | NPE: N | NPA: N N | CS: N A N | D: N | S: N | US: N");
        let b = to_bullock(&line);
        assert_eq!(
            b.0.left,
            arm(ContactPrehensile, NotWithinHand, MotionAtContact)
        );
        let p = to_paulius(&line, true);
        assert_eq!(p.engagement.left, Engagement::SoftContinuous);
        assert!(p.arm_moving.left);
    }

    #[test]
    fn edge_tracing_projects_to_three_cluster_codes_one_segment_code() {
        let d = load_canonical().unwrap();
        let task = d.task("T4").unwrap();
        let flag = task_has_deformable_contact(task);
        let codes: Vec<PauliusCode> = task
            .actions
            .iter()
            .map(|a| to_paulius(&a.code, flag))
            .collect();
        for p in &codes {
            assert_eq!(
                p.engagement,
                PerArm::new(Engagement::SoftContinuous, Engagement::SoftContinuous)
            );
            assert_eq!(p.outcome, codes[0].outcome);
        }
        let cluster: std::collections::BTreeSet<String> =
            codes.iter().map(|p| p.cluster_key()).collect();
        let segment: std::collections::BTreeSet<String> =
            codes.iter().map(|p| p.segment_key()).collect();
        assert_eq!(cluster.len(), 3);
        assert_eq!(segment.len(), 1);
    }

    #[test]
    fn canonical_projection_invariants() {
        let d = load_canonical().unwrap();
        for task in &d.tasks {
            let flag = task_has_deformable_contact(task);
            for action in &task.actions {
                let b = to_bullock(&action.code);
                for side in ArmSide::BOTH {
                    let a = b.0.get(side);
                    assert!(a.is_consistent(), "{}", action.id);
                    assert_ne!(a.motion, WithinHand);
                }
                let p = to_paulius(&action.code, flag);
                assert_ne!(p.outcome, Outcome::Permanent);
                assert_ne!(p.engagement.left, Engagement::RigidDiscontinuous);
            }
        }
    }
}
