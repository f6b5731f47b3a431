//! Tag-level consistency rules over parsed datasets.
//!
//! Sliding rules are structural and reported as errors. Force rules only
//! warn: annotations may leave out environment objects that also hold the
//! deformation.

use std::fmt;

use crate::diagnostic::{Diagnostic, Severity};
use crate::lang::SourceMap;
use crate::taxonomy::{Action, ArmSide, Dataset, Deformation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    R1SlidingRequiresContact,
    R2EnvSlidingRequiresEnv,
    R3TensionNeedsTwoConstraints,
    R4TorsionNeedsTwoConstraints,
    R5CompressionNeedsContact,
    R6ShearNeedsTwoConstraints,
}

impl RuleId {
    pub const ALL: [RuleId; 6] = [
        RuleId::R1SlidingRequiresContact,
        RuleId::R2EnvSlidingRequiresEnv,
        RuleId::R3TensionNeedsTwoConstraints,
        RuleId::R4TorsionNeedsTwoConstraints,
        RuleId::R5CompressionNeedsContact,
        RuleId::R6ShearNeedsTwoConstraints,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::R1SlidingRequiresContact => "R1_SlidingRequiresContact",
            RuleId::R2EnvSlidingRequiresEnv => "R2_EnvSlidingRequiresEnv",
            RuleId::R3TensionNeedsTwoConstraints => "R3_TensionNeedsTwoConstraints",
            RuleId::R4TorsionNeedsTwoConstraints => "R4_TorsionNeedsTwoConstraints",
            RuleId::R5CompressionNeedsContact => "R5_CompressionNeedsContact",
            RuleId::R6ShearNeedsTwoConstraints => "R6_ShearNeedsTwoConstraints",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            RuleId::R1SlidingRequiresContact | RuleId::R2EnvSlidingRequiresEnv => Severity::Error,
            _ => Severity::Warning,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rules violated by a single action, in rule order, with messages.
pub fn check_action(action: &Action) -> Vec<(RuleId, String)> {
    let code = &action.code;
    let mut out = Vec::new();
    for side in ArmSide::BOTH {
        let sliding = code.sliding.arm(side);
        if sliding.is_some() && !code.arm_in_contact(side) {
            out.push((
                RuleId::R1SlidingRequiresContact,
                format!(
                    "{} sliding `{sliding}` without a {} grasp or agent contact",
                    side.name(),
                    side.name()
                ),
            ));
        }
    }
    if code.sliding.env.is_some() && code.env.is_none() {
        out.push((
            RuleId::R2EnvSlidingRequiresEnv,
            format!(
                "environment sliding `{}` without environment contact",
                code.sliding.env
            ),
        ));
    }
    let sources = code.constraint_sources();
    let paired = [
        (
            Deformation::Tension,
            RuleId::R3TensionNeedsTwoConstraints,
            "tension",
        ),
        (
            Deformation::Torsion,
            RuleId::R4TorsionNeedsTwoConstraints,
            "torsion",
        ),
        (
            Deformation::Shear,
            RuleId::R6ShearNeedsTwoConstraints,
            "shear",
        ),
    ];
    for (deformation, rule, name) in paired {
        if code.deformation.contains(deformation) && sources < 2 {
            out.push((
                rule,
                format!("{name} needs two constraint sources, found {sources}"),
            ));
        }
    }
    let touching = ArmSide::BOTH.iter().any(|s| code.arm_in_contact(*s));
    if code.deformation.contains(Deformation::Compression) && !touching {
        out.push((
            RuleId::R5CompressionNeedsContact,
            "compression without any grasp or agent contact".to_string(),
        ));
    }
    out.sort_by_key(|(rule, _)| *rule);
    out
}

pub fn validate(dataset: &Dataset) -> Vec<Diagnostic> {
    validate_with_source(dataset, None)
}

/// Ordered by task, then rule, then action position.
pub fn validate_with_source(dataset: &Dataset, source: Option<&SourceMap>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for task in &dataset.tasks {
        let mut found: Vec<(RuleId, usize, Diagnostic)> = Vec::new();
        for (pos, action) in task.actions.iter().enumerate() {
            for (rule, message) in check_action(action) {
                found.push((
                    rule,
                    pos,
                    Diagnostic {
                        severity: rule.severity(),
                        rule: rule.name().to_string(),
                        message,
                        span: source.and_then(|m| m.action(&action.id)),
                        subject: Some(action.id.clone()),
                    },
                ));
            }
        }
        found.sort_by_key(|(rule, pos, _)| (*rule, *pos));
        out.extend(found.into_iter().map(|(_, _, d)| d));
    }
    out
}
