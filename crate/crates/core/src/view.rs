use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::project::{task_has_deformable_contact, to_bullock, to_paulius};
use crate::taxonomy::{Action, Task};

/// A lens through which action codes are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaxonomyView {
    TDom,
    TDomNoDeformation,
    Bullock,
    PauliusSegment,
    PauliusCluster,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "unknown view `{0}` (expected tdom, tdom-nodef, bullock, paulius-cluster or paulius-segment)"
)]
pub struct UnknownView(pub String);

impl TaxonomyView {
    pub const ALL: [TaxonomyView; 5] = [
        TaxonomyView::TDom,
        TaxonomyView::TDomNoDeformation,
        TaxonomyView::Bullock,
        TaxonomyView::PauliusSegment,
        TaxonomyView::PauliusCluster,
    ];

    /// The four views compared in the clustering statistics.
    pub const CLUSTERING: [TaxonomyView; 4] = [
        TaxonomyView::TDom,
        TaxonomyView::TDomNoDeformation,
        TaxonomyView::Bullock,
        TaxonomyView::PauliusCluster,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaxonomyView::TDom => "tdom",
            TaxonomyView::TDomNoDeformation => "tdom-nodef",
            TaxonomyView::Bullock => "bullock",
            TaxonomyView::PauliusSegment => "paulius-segment",
            TaxonomyView::PauliusCluster => "paulius-cluster",
        }
    }

    /// The same view with deformation removed. Only the full T-DOM view
    /// sees deformation, so every other view maps to itself.
    pub fn without_deformation(self) -> TaxonomyView {
        match self {
            TaxonomyView::TDom => TaxonomyView::TDomNoDeformation,
            other => other,
        }
    }

    /// Projected code string for each action of `task`, in order.
    pub fn task_codes(self, task: &Task) -> Vec<String> {
        let flag = task_has_deformable_contact(task);
        task.actions
            .iter()
            .map(|a| self.code_with(a, flag))
            .collect()
    }

    fn code_with(self, action: &Action, deformable_contact: bool) -> String {
        let code = &action.code;
        match self {
            TaxonomyView::TDom => code.action_id(),
            TaxonomyView::TDomNoDeformation => code.mask_deformation().action_id(),
            TaxonomyView::Bullock => to_bullock(code).to_string(),
            TaxonomyView::PauliusSegment => to_paulius(code, deformable_contact).segment_key(),
            TaxonomyView::PauliusCluster => to_paulius(code, deformable_contact).cluster_key(),
        }
    }
}

impl fmt::Display for TaxonomyView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaxonomyView {
    type Err = UnknownView;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TaxonomyView::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| UnknownView(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for v in TaxonomyView::ALL {
            assert_eq!(v.name().parse::<TaxonomyView>().unwrap(), v);
        }
        assert!("paulius".parse::<TaxonomyView>().is_err());
    }
}
