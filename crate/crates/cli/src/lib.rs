//! `tdom` command dispatch. [`run`] takes the argument list and output
//! streams so it can be driven from tests.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use tdom_core::bend::{
    assess_1d_with, assess_2d, BendError, BucketMap, ClothState, Polyline3D, Vec3,
};
use tdom_core::canonical::corpus;
use tdom_core::cluster::{
    cluster, emit_dot, stats_table, styles_for, ClusterReport, Palette, TableFormat,
};
use tdom_core::lang::{parse_with_source_map, to_json};
use tdom_core::segment::lane_report;
use tdom_core::validate::validate_with_source;
use tdom_core::{Dataset, Diagnostic, Severity, TaxonomyView};

/// Default palette path when `--palette` is absent.
pub const PALETTE_ENV: &str = "TDOM_PALETTE";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    /// Validation errors or a failed check.
    Failure = 1,
    Usage = 2,
    /// Unreadable input or a parse failure.
    Input = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Parser)]
#[command(
    name = "tdom",
    version,
    about = "Annotate, check and compare deformable manipulation tasks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a dataset; exits 1 on any error.
    Validate { file: PathBuf },
    /// Print segment lanes of one task under several views.
    Segment {
        file: PathBuf,
        #[arg(long)]
        task: String,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "tdom,bullock,paulius-segment"
        )]
        views: Vec<TaxonomyView>,
    },
    /// Cluster statistics for one view.
    Cluster {
        file: PathBuf,
        #[arg(long)]
        view: TaxonomyView,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        mask_deformation: bool,
        #[command(flatten)]
        dest: Destination,
        #[arg(long)]
        palette: Option<PathBuf>,
    },
    /// Per-action codes in a baseline taxonomy.
    Project {
        file: PathBuf,
        #[arg(long, value_parser = baseline_view)]
        view: TaxonomyView,
    },
    /// Write the action-ID graph of one view as DOT.
    Graph {
        file: PathBuf,
        #[arg(long)]
        view: TaxonomyView,
        #[arg(long)]
        mask_deformation: bool,
        #[command(flatten)]
        dest: Destination,
        #[arg(long)]
        palette: Option<PathBuf>,
    },
    /// Bending levels from geometry.
    #[command(subcommand)]
    Bend(BendCommand),
    /// The shipped dataset.
    #[command(subcommand)]
    Dataset(DatasetCommand),
    /// Cluster statistics across all views.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = TableKind::Table)]
        format: TableKind,
    },
}

#[derive(Subcommand)]
enum BendCommand {
    /// A 1D object given as an `x y z` polyline file.
    Polyline {
        path: PathBuf,
        #[arg(long, value_parser = parse_direction, default_value = "0,0,1")]
        direction: Vec3,
        /// TOML bucket map for the unstructured level.
        #[arg(long)]
        buckets: Option<PathBuf>,
    },
    /// A 2D object given as a keypoint/g-fold description.
    Cloth { path: PathBuf },
}

#[derive(Subcommand)]
enum DatasetCommand {
    /// Write the canonical dataset.
    Export {
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ExportFormat::Tdom)]
        format: ExportFormat,
    },
}

#[derive(Args)]
struct Destination {
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Allow DOT on standard output.
    #[arg(long, conflicts_with = "output")]
    stdout: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    Table,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Tdom,
    Json,
}

fn baseline_view(s: &str) -> Result<TaxonomyView, String> {
    match s.parse::<TaxonomyView>() {
        Ok(
            v @ (TaxonomyView::Bullock
            | TaxonomyView::PauliusCluster
            | TaxonomyView::PauliusSegment),
        ) => Ok(v),
        Ok(v) => Err(format!(
            "`{v}` is not a baseline taxonomy (use bullock, paulius-cluster or paulius-segment)"
        )),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_direction(s: &str) -> Result<Vec3, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{p}` is not a number"))
        })
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [x, y, z] => Ok([*x, *y, *z]),
        _ => Err("expected three comma-separated numbers".into()),
    }
}

/// Error carried to the top level with its exit status.
struct Fail {
    status: ExitStatus,
    lines: Vec<String>,
}

impl Fail {
    fn input(message: impl Into<String>) -> Fail {
        Fail {
            status: ExitStatus::Input,
            lines: vec![message.into()],
        }
    }

    fn usage(message: impl Into<String>) -> Fail {
        Fail {
            status: ExitStatus::Usage,
            lines: vec![message.into()],
        }
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Fail {
        // a reader that stops early (`| head`) is not an error
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Fail {
                status: ExitStatus::Success,
                lines: Vec::new(),
            };
        }
        Fail::input(format!("error: {e}"))
    }
}

impl From<BendError> for Fail {
    fn from(e: BendError) -> Fail {
        Fail::input(format!("error: {e}"))
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path)
        .map_err(|e| Fail::input(format!("error: cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(Dataset, tdom_core::lang::SourceMap), Fail> {
    let text = read(path)?;
    parse_with_source_map(&text).map_err(|diags| Fail {
        status: ExitStatus::Input,
        lines: diags
            .iter()
            .map(|d| format!("{}: {d}", path.display()))
            .collect(),
    })
}

fn write_to(dest: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Fail> {
    match dest {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Fail::input(format!("error: cannot write {}: {e}", path.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn palette(flag: Option<&Path>) -> Result<Palette, Fail> {
    let env = std::env::var_os(PALETTE_ENV).map(PathBuf::from);
    match flag.map(Path::to_path_buf).or(env) {
        Some(path) => Palette::load(&path).map_err(|e| Fail::input(format!("error: {e}"))),
        None => Ok(Palette::default()),
    }
}

fn dot_output(
    report: &ClusterReport,
    d: &Dataset,
    dest: &Destination,
    palette_flag: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), Fail> {
    if dest.output.is_none() && !dest.stdout {
        return Err(Fail::usage(
            "error: DOT output needs `-o <path>` or `--stdout`",
        ));
    }
    let dot = emit_dot(report, &styles_for(d), &palette(palette_flag)?)
        .map_err(|e| Fail::input(format!("error: {e}")))?;
    write_to(dest.output.as_deref(), &dot, out)
}

fn cluster_listing(report: &ClusterReport) -> String {
    let mut text = String::new();
    for c in report.clusters.iter().filter(|c| c.members.len() > 1) {
        text.push_str(&format!(
            "{:>3}  {}  {}\n",
            c.members.len(),
            c.members.join(" "),
            c.code
        ));
    }
    text
}

fn diagnostics_summary(diags: &[Diagnostic]) -> String {
    let errors = diags
        .iter()
        .filter(|d| d.severity == Severity::Error)
        .count();
    format!("{errors} error(s), {} warning(s)", diags.len() - errors)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<ExitStatus, Fail> {
    match command {
        Command::Validate { file } => {
            let (d, map) = load(&file)?;
            let diags = validate_with_source(&d, Some(&map));
            for diag in &diags {
                writeln!(out, "{}: {diag}", file.display())?;
            }
            writeln!(out, "{}", diagnostics_summary(&diags))?;
            Ok(if diags.iter().any(Diagnostic::is_error) {
                ExitStatus::Failure
            } else {
                ExitStatus::Success
            })
        }
        Command::Segment { file, task, views } => {
            let (d, _) = load(&file)?;
            let t = d.task(&task).ok_or_else(|| {
                Fail::usage(format!("error: no task `{task}` in {}", file.display()))
            })?;
            out.write_all(lane_report(t, &views).as_bytes())?;
            Ok(ExitStatus::Success)
        }
        Command::Cluster {
            file,
            view,
            format,
            mask_deformation,
            dest,
            palette,
        } => {
            let (d, _) = load(&file)?;
            let view = if mask_deformation {
                view.without_deformation()
            } else {
                view
            };
            let report = cluster(&d, view);
            match format {
                Format::Dot => dot_output(&report, &d, &dest, palette.as_deref(), out)?,
                Format::Csv => write_to(
                    dest.output.as_deref(),
                    &stats_table(&[report], TableFormat::Csv),
                    out,
                )?,
                Format::Table => {
                    let text = format!(
                        "{}\n{}",
                        stats_table(std::slice::from_ref(&report), TableFormat::Text),
                        cluster_listing(&report)
                    );
                    write_to(dest.output.as_deref(), &text, out)?
                }
            }
            Ok(ExitStatus::Success)
        }
        Command::Project { file, view } => {
            let (d, _) = load(&file)?;
            for task in &d.tasks {
                for (action, code) in task.actions.iter().zip(view.task_codes(task)) {
                    writeln!(out, "{:<7} {:<20} {code}", action.id, action.verb)?;
                }
            }
            Ok(ExitStatus::Success)
        }
        Command::Graph {
            file,
            view,
            mask_deformation,
            dest,
            palette,
        } => {
            let (d, _) = load(&file)?;
            let view = if mask_deformation {
                view.without_deformation()
            } else {
                view
            };
            dot_output(&cluster(&d, view), &d, &dest, palette.as_deref(), out)?;
            Ok(ExitStatus::Success)
        }
        Command::Bend(BendCommand::Polyline {
            path,
            direction,
            buckets,
        }) => {
            let polyline = Polyline3D::parse(&read(&path)?)?;
            let map = match buckets {
                Some(b) => BucketMap::load(&b)?,
                None => BucketMap::default(),
            };
            writeln!(out, "{}", assess_1d_with(&polyline, direction, &map)?)?;
            Ok(ExitStatus::Success)
        }
        Command::Bend(BendCommand::Cloth { path }) => {
            let state = ClothState::parse(&read(&path)?)?;
            writeln!(out, "{}", assess_2d(&state)?)?;
            Ok(ExitStatus::Success)
        }
        Command::Dataset(DatasetCommand::Export { output, format }) => {
            let c = corpus();
            let text = match format {
                ExportFormat::Tdom => c.text.to_string(),
                ExportFormat::Json => {
                    let d = tdom_core::load_canonical()
                        .map_err(|e| Fail::input(format!("error: {e}")))?;
                    to_json(&d) + "\n"
                }
            };
            write_to(output.as_deref(), &text, out)?;
            Ok(ExitStatus::Success)
        }
        Command::Report { file, format } => {
            let (d, map) = load(&file)?;
            let reports: Vec<ClusterReport> =
                TaxonomyView::ALL.iter().map(|v| cluster(&d, *v)).collect();
            let format = match format {
                TableKind::Table => TableFormat::Text,
                TableKind::Csv => TableFormat::Csv,
            };
            if matches!(format, TableFormat::Text) {
                let diags = validate_with_source(&d, Some(&map));
                writeln!(
                    out,
                    "{}: {} tasks, {} actions, {}\n",
                    file.display(),
                    d.tasks.len(),
                    d.action_count(),
                    diagnostics_summary(&diags)
                )?;
            }
            out.write_all(stats_table(&reports, format).as_bytes())?;
            Ok(ExitStatus::Success)
        }
    }
}

/// Runs one command line (including the program name) and reports the
/// exit status. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                ExitStatus::Usage
            } else {
                let _ = out.write_all(text.as_bytes());
                ExitStatus::Success
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(status) => status,
        Err(fail) => {
            for line in fail.lines {
                let _ = writeln!(err, "{line}");
            }
            fail.status
        }
    }
}
