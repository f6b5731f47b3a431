//! Action-ID equivalence clusters, their statistics, and DOT output.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::taxonomy::{ActionCode, Dataset};
use crate::view::TaxonomyView;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub code: String,
    /// Action ids in dataset order.
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClusterStats {
    pub total_actions: usize,
    pub distinct_codes: usize,
    pub multi_member: usize,
    pub largest: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterReport {
    pub view: TaxonomyView,
    /// Ordered by the dataset position of each cluster's first member.
    pub clusters: Vec<Cluster>,
    pub stats: ClusterStats,
}

impl ClusterReport {
    pub fn cluster_of(&self, action_id: &str) -> Option<&Cluster> {
        self.clusters
            .iter()
            .find(|c| c.members.iter().any(|m| m == action_id))
    }

    pub fn largest(&self) -> Option<&Cluster> {
        // first of the largest, for determinism
        self.clusters.iter().rev().max_by_key(|c| c.members.len())
    }

    pub fn edge_count(&self) -> usize {
        self.clusters
            .iter()
            .map(|c| c.members.len().saturating_sub(1))
            .sum()
    }
}

/// Groups actions by exact equality of their code under `view`.
pub fn cluster(dataset: &Dataset, view: TaxonomyView) -> ClusterReport {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut clusters: Vec<Cluster> = Vec::new();
    for task in &dataset.tasks {
        for (action, code) in task.actions.iter().zip(view.task_codes(task)) {
            let slot = *index.entry(code.clone()).or_insert_with(|| {
                clusters.push(Cluster {
                    code,
                    members: Vec::new(),
                });
                clusters.len() - 1
            });
            clusters[slot].members.push(action.id.clone());
        }
    }
    let stats = ClusterStats {
        total_actions: clusters.iter().map(|c| c.members.len()).sum(),
        distinct_codes: clusters.len(),
        multi_member: clusters.iter().filter(|c| c.members.len() > 1).count(),
        largest: clusters.iter().map(|c| c.members.len()).max().unwrap_or(0),
    };
    ClusterReport {
        view,
        clusters,
        stats,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeShape {
    /// No bending.
    Circle,
    /// Structured bending only.
    TriangleUp,
    /// Unstructured bending only.
    TriangleDown,
    /// Both.
    Square,
}

impl NodeShape {
    pub fn dot_name(self) -> &'static str {
        match self {
            NodeShape::Circle => "circle",
            NodeShape::TriangleUp => "triangle",
            NodeShape::TriangleDown => "invtriangle",
            NodeShape::Square => "square",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeStyle {
    pub shape: NodeShape,
    /// Deformation combination such as `C`, `TN+TR` or `N`.
    pub color_key: String,
}

impl NodeStyle {
    pub fn for_code(code: &ActionCode) -> NodeStyle {
        let shape = match (code.structured.is_none(), code.unstructured.is_none()) {
            (true, true) => NodeShape::Circle,
            (false, true) => NodeShape::TriangleUp,
            (true, false) => NodeShape::TriangleDown,
            (false, false) => NodeShape::Square,
        };
        NodeStyle {
            shape,
            color_key: code.deformation.to_string(),
        }
    }
}

/// Styles derived from each action's own (unprojected) code.
pub fn styles_for(dataset: &Dataset) -> BTreeMap<String, NodeStyle> {
    dataset
        .actions()
        .map(|(_, a)| (a.id.clone(), NodeStyle::for_code(&a.code)))
        .collect()
}

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("no node style for action `{0}`")]
    MissingStyle(String),
    #[error("cannot read palette {path}: {source}")]
    PaletteIo {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid palette: {0}")]
    PaletteFormat(String),
}

const DEFAULT_COLORS: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac", "#8cd17d", "#d37295",
];

/// Colour per deformation key. Keys without an explicit entry get a colour
/// chosen by a stable hash of the key.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Palette {
    colors: BTreeMap<String, String>,
}

#[derive(Deserialize)]
struct PaletteFile {
    colors: BTreeMap<String, String>,
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

fn is_color(value: &str) -> bool {
    value.len() == 7 && value.starts_with('#') && value[1..].bytes().all(|b| b.is_ascii_hexdigit())
}

impl Palette {
    /// Parses a TOML palette:
    ///
    /// ```toml
    /// [colors]
    /// "N" = "#cccccc"
    /// "TN+TR" = "#aa0000"
    /// ```
    pub fn from_toml(text: &str) -> Result<Palette, ClusterError> {
        let file: PaletteFile =
            toml::from_str(text).map_err(|e| ClusterError::PaletteFormat(e.to_string()))?;
        if let Some((key, bad)) = file.colors.iter().find(|(_, v)| !is_color(v)) {
            return Err(ClusterError::PaletteFormat(format!(
                "colour for `{key}` must be #rrggbb, found `{bad}`"
            )));
        }
        Ok(Palette {
            colors: file.colors,
        })
    }

    pub fn load(path: &Path) -> Result<Palette, ClusterError> {
        let text = std::fs::read_to_string(path).map_err(|source| ClusterError::PaletteIo {
            path: path.display().to_string(),
            source,
        })?;
        Palette::from_toml(&text)
    }

    pub fn color(&self, key: &str) -> &str {
        self.colors
            .get(key)
            .map(String::as_str)
            .unwrap_or_else(|| DEFAULT_COLORS[(fnv1a(key) % DEFAULT_COLORS.len() as u64) as usize])
    }
}

fn dot_id(text: &str) -> String {
    format!("\"{}\"", text.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected DOT graph. Each multi-member cluster is drawn as a path over
/// its members in dataset order, one edge per consecutive pair.
pub fn emit_dot(
    report: &ClusterReport,
    styles: &BTreeMap<String, NodeStyle>,
    palette: &Palette,
) -> Result<String, ClusterError> {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", dot_id(report.view.name()));
    let _ = writeln!(out, "  node [style=filled, fontsize=10];");
    for (k, cluster) in report.clusters.iter().enumerate() {
        let _ = writeln!(out, "  // cluster {k}: {}", cluster.code);
        for member in &cluster.members {
            let style = styles
                .get(member)
                .ok_or_else(|| ClusterError::MissingStyle(member.clone()))?;
            let _ = writeln!(
                out,
                "  {} [label={}, shape={}, fillcolor={}];",
                dot_id(member),
                dot_id(member),
                style.shape.dot_name(),
                dot_id(palette.color(&style.color_key)),
            );
        }
        for pair in cluster.members.windows(2) {
            let _ = writeln!(out, "  {} -- {};", dot_id(&pair[0]), dot_id(&pair[1]));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
}

const COLUMNS: [&str; 4] = [
    "view",
    "distinct_codes",
    "multi_member_clusters",
    "largest_cluster",
];

pub fn stats_table(reports: &[ClusterReport], format: TableFormat) -> String {
    let rows: Vec<[String; 4]> = reports
        .iter()
        .map(|r| {
            [
                r.view.name().to_string(),
                r.stats.distinct_codes.to_string(),
                r.stats.multi_member.to_string(),
                r.stats.largest.to_string(),
            ]
        })
        .collect();
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            let _ = writeln!(out, "{}", COLUMNS.join(","));
            for row in &rows {
                let _ = writeln!(out, "{}", row.join(","));
            }
        }
        TableFormat::Text => {
            let widths: Vec<usize> = (0..4)
                .map(|i| {
                    rows.iter()
                        .map(|r| r[i].len())
                        .chain([COLUMNS[i].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: [&str; 4]| {
                let mut s = format!("{:<w$}", cells[0], w = widths[0]);
                for i in 1..4 {
                    let _ = write!(s, "  {:>w$}", cells[i], w = widths[i]);
                }
                s
            };
            let _ = writeln!(out, "{}", line(COLUMNS));
            for row in &rows {
                let _ = writeln!(out, "{}", line([&row[0], &row[1], &row[2], &row[3]]));
            }
        }
    }
    out
}
