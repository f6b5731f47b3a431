//! Segment boundaries of a task under a view, and cross-view comparison.
//!
//! Boundary `b` sits between action `b` and action `b + 1` (1-based), so a
//! task of `n` actions has candidate boundaries `1..n`.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::taxonomy::Task;
use crate::view::TaxonomyView;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    /// First action, 1-based.
    pub start: usize,
    /// Last action, inclusive.
    pub end: usize,
    pub code: String,
}

impl Segment {
    pub fn action_count(&self) -> usize {
        self.end + 1 - self.start
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    pub task_id: String,
    pub view: TaxonomyView,
    pub segments: Vec<Segment>,
}

impl Segmentation {
    pub fn boundaries(&self) -> BTreeSet<usize> {
        self.segments.iter().skip(1).map(|s| s.start - 1).collect()
    }

    pub fn action_count(&self) -> usize {
        self.segments.last().map(|s| s.end).unwrap_or(0)
    }
}

/// Merges maximal runs of equal projected codes.
pub fn segment(task: &Task, view: TaxonomyView) -> Segmentation {
    let mut segments: Vec<Segment> = Vec::new();
    for (i, code) in view.task_codes(task).into_iter().enumerate() {
        match segments.last_mut() {
            Some(last) if last.code == code => last.end = i + 1,
            _ => segments.push(Segment {
                start: i + 1,
                end: i + 1,
                code,
            }),
        }
    }
    Segmentation {
        task_id: task.id.clone(),
        view,
        segments,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundaryComparison {
    pub only_a: BTreeSet<usize>,
    pub only_b: BTreeSet<usize>,
    pub shared: BTreeSet<usize>,
}

pub fn compare(task: &Task, a: TaxonomyView, b: TaxonomyView) -> BoundaryComparison {
    let ba = segment(task, a).boundaries();
    let bb = segment(task, b).boundaries();
    BoundaryComparison {
        only_a: ba.difference(&bb).copied().collect(),
        only_b: bb.difference(&ba).copied().collect(),
        shared: ba.intersection(&bb).copied().collect(),
    }
}

fn segment_label(index: usize) -> String {
    let mut n = index;
    let mut label = Vec::new();
    loop {
        label.push(b'A' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    label.reverse();
    String::from_utf8(label).expect("ascii")
}

/// One lane per view, one column per action and `|` at each boundary.
/// Every lane is printed; lanes with a single segment are marked constant.
pub fn lane_report(task: &Task, views: &[TaxonomyView]) -> String {
    let n = task.actions.len();
    let segs: Vec<Segmentation> = views.iter().map(|v| segment(task, *v)).collect();
    let name_width = views
        .iter()
        .map(|v| v.name().len())
        .max()
        .unwrap_or(4)
        .max(4);
    let col = segs
        .iter()
        .flat_map(|s| (0..s.segments.len()).map(segment_label))
        .chain((1..=n).map(|i| i.to_string()))
        .map(|s| s.len())
        .max()
        .unwrap_or(1);

    let mut out = String::new();
    let _ = writeln!(out, "task {} ({}), {} actions", task.id, task.name, n);
    let header: Vec<String> = (1..=n).map(|i| format!("{i:>col$}")).collect();
    let _ = writeln!(
        out,
        "{:name_width$}  {}  segments",
        "view",
        header.join("   ")
    );
    for seg in &segs {
        let mut lane = String::new();
        for (k, s) in seg.segments.iter().enumerate() {
            for pos in s.start..=s.end {
                if pos > 1 {
                    lane.push_str(if pos == s.start { " | " } else { "   " });
                }
                let _ = write!(lane, "{:>col$}", segment_label(k));
            }
        }
        let constant = if seg.segments.len() == 1 {
            " (constant)"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "{:name_width$}  {}  {}{}",
            seg.view.name(),
            lane,
            seg.segments.len(),
            constant
        );
    }
    for seg in &segs {
        let _ = writeln!(out, "\n{}:", seg.view.name());
        for (k, s) in seg.segments.iter().enumerate() {
            let _ = writeln!(
                out,
                "  {} [{}-{}] {}",
                segment_label(k),
                s.start,
                s.end,
                s.code
            );
        }
    }
    out
}
