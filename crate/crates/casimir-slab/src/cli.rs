//! Sweep driver, figure datasets, CSV/SVG emission and configuration
//! handling behind the command-line binary.
//!
//! Output is deterministic: values are printed in scientific notation with
//! 12 significant digits, grid points are assembled in axis order no
//! matter how many workers computed them, and the SVG writer formats
//! coordinates with fixed precision.

use crate::medium::MirrorModel;
use crate::modes;
use crate::pressure::{self, PressureError, SlabSystem};
use crate::quadrature::QuadratureSpec;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown quantity '{0}' (expected F_free, F_mirrors, F_cavity, F_interaction, F_S, F_nr, F_C or a ratio A/B)")]
    UnknownQuantity(String),
    #[error("invalid range '{0}' (expected min:max:points:log|lin with min < max and points >= 2)")]
    InvalidRange(String),
    #[error("unknown figure '{0}' (expected fig2, fig3, fig4 or fig5)")]
    UnknownFigure(String),
    #[error("unknown mirror model '{0}' (expected none or perfect)")]
    UnknownMirror(String),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("dataset has no data rows; nothing to plot")]
    EmptyDataset,
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Pressure(#[from] PressureError),
}

// ---------------------------------------------------------------------------
// Quantities
// ---------------------------------------------------------------------------

/// A single computable quantity at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    FFree,
    FMirrors,
    FCavity,
    FInteraction,
    FS,
    FNr,
    FC,
}

impl Quantity {
    fn parse_one(s: &str) -> Result<Self, CliError> {
        match s {
            "F_free" => Ok(Quantity::FFree),
            "F_mirrors" => Ok(Quantity::FMirrors),
            "F_cavity" => Ok(Quantity::FCavity),
            "F_interaction" => Ok(Quantity::FInteraction),
            "F_S" => Ok(Quantity::FS),
            "F_nr" => Ok(Quantity::FNr),
            "F_C" => Ok(Quantity::FC),
            other => Err(CliError::UnknownQuantity(other.to_string())),
        }
    }
}

/// A quantity or a ratio of two quantities, as given on the command line.
#[derive(Debug, Clone, Copy)]
pub struct QuantitySpec {
    pub numerator: Quantity,
    pub denominator: Option<Quantity>,
}

impl QuantitySpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.split_once('/') {
            None => Ok(QuantitySpec {
                numerator: Quantity::parse_one(s)?,
                denominator: None,
            }),
            Some((a, b)) => Ok(QuantitySpec {
                numerator: Quantity::parse_one(a)?,
                denominator: Some(Quantity::parse_one(b)?),
            }),
        }
    }
}

/// Sweep axis: slab thickness or (symmetric) slab-mirror gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Ds,
    Gap,
}

impl Axis {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "ds" => Ok(Axis::Ds),
            "d" | "gap" => Ok(Axis::Gap),
            other => Err(CliError::InvalidRange(format!("unknown axis '{other}'"))),
        }
    }

    fn column(self) -> &'static str {
        match self {
            Axis::Ds => "kp_ds",
            Axis::Gap => "kp_d",
        }
    }
}

/// Grid description min:max:points:log|lin.
#[derive(Debug, Clone, Copy)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub log: bool,
}

impl SweepRange {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(CliError::InvalidRange(s.to_string()));
        }
        let min: f64 = parts[0]
            .parse()
            .map_err(|_| CliError::InvalidRange(s.to_string()))?;
        let max: f64 = parts[1]
            .parse()
            .map_err(|_| CliError::InvalidRange(s.to_string()))?;
        let points: usize = parts[2]
            .parse()
            .map_err(|_| CliError::InvalidRange(s.to_string()))?;
        let log = match parts[3] {
            "log" => true,
            "lin" => false,
            _ => return Err(CliError::InvalidRange(s.to_string())),
        };
        if !min.is_finite() || !max.is_finite() || min >= max || points < 2 || (log && min <= 0.0) {
            return Err(CliError::InvalidRange(s.to_string()));
        }
        Ok(SweepRange {
            min,
            max,
            points,
            log,
        })
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if self.log {
                    (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + t * (self.max - self.min)
                }
            })
            .collect()
    }
}

/// Declarative sweep description consumed by `run_sweep`.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub quantity: QuantitySpec,
    pub axis: Axis,
    pub range: SweepRange,
    /// Fixed slab thickness (used when the axis is the gap).
    pub ds: f64,
    /// Fixed gaps (used when the axis is the thickness); a missing value
    /// with perfect mirrors means gap zero.
    pub gap1: Option<f64>,
    pub gap2: Option<f64>,
    pub mirrors: MirrorModel,
    pub quad: QuadratureSpec,
    pub workers: usize,
    /// Command line echoed into the CSV provenance comment.
    pub invocation: String,
}

/// One computed grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub axis_value: f64,
    pub value: Option<f64>,
    pub error_estimate: Option<f64>,
    pub formula: String,
    pub status: String,
}

pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub any_failed: bool,
    pub spec: SweepSpec,
}

struct EvalContext {
    ds: f64,
    gap1: Option<f64>,
    gap2: Option<f64>,
    mirrors: MirrorModel,
    quad: QuadratureSpec,
}

fn system_for(ctx: &EvalContext) -> Result<SlabSystem, PressureError> {
    match ctx.mirrors {
        MirrorModel::None => SlabSystem::free(ctx.ds),
        MirrorModel::Perfect => SlabSystem::from_gaps(
            ctx.ds,
            ctx.gap1.unwrap_or(0.0),
            ctx.gap2.or(ctx.gap1).unwrap_or(0.0),
        ),
    }
}

fn evaluate_single(q: Quantity, ctx: &EvalContext) -> Result<(f64, f64, String), String> {
    let as_triple =
        |p: pressure::PressureValue| (p.value, p.error_estimate, p.formula.label().to_string());
    let pres = |r: Result<pressure::PressureValue, PressureError>| {
        r.map(as_triple).map_err(|e| e.to_string())
    };
    match q {
        Quantity::FFree => pres(pressure::pressure_free_with(ctx.ds, &ctx.quad)),
        Quantity::FMirrors => pres(pressure::pressure_mirrors_bessel(ctx.ds)),
        Quantity::FCavity => pres(
            system_for(ctx).and_then(|sys| pressure::pressure_cavity_with(&sys, &ctx.quad)),
        ),
        Quantity::FInteraction => pres(
            system_for(ctx).and_then(|sys| pressure::interaction_force_with(&sys, &ctx.quad)),
        ),
        Quantity::FS => {
            let gap = match ctx.mirrors {
                MirrorModel::None => None,
                MirrorModel::Perfect => Some(ctx.gap1.unwrap_or(0.0)),
            };
            let ms = modes::sp_pressure_retarded(ctx.ds, gap).map_err(|e| e.to_string())?;
            Ok((ms.total, ms.error_estimate, "mode_sum".to_string()))
        }
        Quantity::FNr => pres(pressure::pressure_nonretarded(ctx.ds)),
        Quantity::FC => Ok((pressure::casimir_pressure(ctx.ds), 0.0, "casimir".to_string())),
    }
}

fn evaluate(spec: &QuantitySpec, ctx: &EvalContext) -> Result<(f64, f64, String), String> {
    let (num, num_err, num_tag) = evaluate_single(spec.numerator, ctx)?;
    match spec.denominator {
        None => Ok((num, num_err, num_tag)),
        Some(d) => {
            let (den, den_err, den_tag) = evaluate_single(d, ctx)?;
            let ratio = num / den;
            let err = ratio.abs()
                * (num_err / num.abs().max(f64::MIN_POSITIVE)
                    + den_err / den.abs().max(f64::MIN_POSITIVE));
            Ok((ratio, err, format!("{num_tag}/{den_tag}")))
        }
    }
}

/// Map grid indices to values on a small worker pool; results come back in
/// index order regardless of completion order.
pub fn par_map<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.max(1).min(n.max(1));
    if workers == 1 {
        return (0..n).map(&f).collect();
    }
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..n).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let value = f(i);
                slots.lock().expect("worker poisoned")[i] = Some(value);
            });
        }
    });
    slots
        .into_inner()
        .expect("worker poisoned")
        .into_iter()
        .map(|v| v.expect("all slots filled"))
        .collect()
}

/// Evaluate the sweep's quantity once, at the fixed parameters.
pub fn evaluate_point(spec: &SweepSpec) -> SweepRow {
    let ctx = EvalContext {
        ds: spec.ds,
        gap1: spec.gap1,
        gap2: spec.gap2,
        mirrors: spec.mirrors,
        quad: spec.quad,
    };
    match evaluate(&spec.quantity, &ctx) {
        Ok((value, err, tag)) => SweepRow {
            axis_value: spec.ds,
            value: Some(value),
            error_estimate: Some(err),
            formula: tag,
            status: "ok".to_string(),
        },
        Err(e) => SweepRow {
            axis_value: spec.ds,
            value: None,
            error_estimate: None,
            formula: String::new(),
            status: e,
        },
    }
}

/// Evaluate a sweep; individual point failures land in the row status
/// instead of aborting the whole run.
pub fn run_sweep(spec: &SweepSpec) -> SweepResult {
    let grid = spec.range.grid();
    let rows = par_map(grid.len(), spec.workers, |i| {
        let axis_value = grid[i];
        let ctx = match spec.axis {
            Axis::Ds => EvalContext {
                ds: axis_value,
                gap1: spec.gap1,
                gap2: spec.gap2,
                mirrors: spec.mirrors,
                quad: spec.quad,
            },
            Axis::Gap => EvalContext {
                ds: spec.ds,
                gap1: Some(axis_value),
                gap2: Some(axis_value),
                mirrors: MirrorModel::Perfect,
                quad: spec.quad,
            },
        };
        match evaluate(&spec.quantity, &ctx) {
            Ok((value, err, tag)) => SweepRow {
                axis_value,
                value: Some(value),
                error_estimate: Some(err),
                formula: tag,
                status: "ok".to_string(),
            },
            Err(e) => SweepRow {
                axis_value,
                value: None,
                error_estimate: None,
                formula: String::new(),
                status: e.to_string().replace(',', ";"),
            },
        }
    });
    let any_failed = rows.iter().any(|r| r.status != "ok");
    SweepResult {
        rows,
        any_failed,
        spec: spec.clone(),
    }
}

fn fmt_value(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.11e}"),
        None => "nan".to_string(),
    }
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.spec.invocation);
        let _ = writeln!(
            out,
            "# xscale: {}",
            if self.spec.range.log { "log" } else { "linear" }
        );
        let quantity_label = match self.spec.quantity.denominator {
            None => format!("{:?}", self.spec.quantity.numerator),
            Some(d) => format!("{:?}/{d:?}", self.spec.quantity.numerator),
        };
        let _ = writeln!(
            out,
            "{},{},error_estimate,formula,status",
            self.spec.axis.column(),
            quantity_label
        );
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_value(Some(row.axis_value)),
                fmt_value(row.value),
                fmt_value(row.error_estimate),
                row.formula,
                row.status
            );
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Figure datasets
// ---------------------------------------------------------------------------

/// The four figure datasets the tool can regenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureId {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "fig2" => Ok(FigureId::Fig2),
            "fig3" => Ok(FigureId::Fig3),
            "fig4" => Ok(FigureId::Fig4),
            "fig5" => Ok(FigureId::Fig5),
            other => Err(CliError::UnknownFigure(other.to_string())),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        }
    }
}

/// A multi-column dataset: one axis column plus value/error column pairs.
pub struct Dataset {
    pub invocation: String,
    pub xscale_log: bool,
    /// Column names; index 0 is the axis. Error columns end in `_err`.
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Dataset {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.invocation);
        let _ = writeln!(
            out,
            "# xscale: {}",
            if self.xscale_log { "log" } else { "linear" }
        );
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| fmt_value(v)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

const FIGURE_POINTS: usize = 25;

fn log_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    SweepRange {
        min,
        max,
        points,
        log: true,
    }
    .grid()
}

/// Figure tolerances: the datasets trade the last two digits for speed.
fn figure_spec() -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-7,
        ..Default::default()
    }
}

/// Regenerate one of the published figure datasets.
pub fn fig_dataset(fig: FigureId, workers: usize) -> Result<Dataset, CliError> {
    let quad = figure_spec();
    let invocation = format!("casimir-slab figure {}", fig.label());
    match fig {
        FigureId::Fig2 | FigureId::Fig3 => {
            let grid = log_grid(1e-3, 2.0, FIGURE_POINTS);
            let two_pi = 2.0 * std::f64::consts::PI;
            let rows = par_map(grid.len(), workers, |i| {
                let a = grid[i];
                let ds = two_pi * a;
                let f = pressure::pressure_free_with(ds, &quad).ok();
                let fnr = pressure::pressure_nonretarded(ds).ok();
                let sp = modes::sp_pressure_retarded(ds, None).ok();
                (a, f, fnr, sp)
            });
            let header: Vec<String> = if fig == FigureId::Fig2 {
                ["ds_over_lambda_p", "f_over_fnr", "f_over_fnr_err", "fs_over_fnr", "fs_over_fnr_err"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect()
            } else {
                [
                    "ds_over_lambda_p",
                    "f",
                    "f_err",
                    "f_s",
                    "f_s_err",
                    "f_sp_minus",
                    "f_sp_minus_err",
                    "f_sp_plus",
                    "f_sp_plus_err",
                    "f_over_fnr",
                    "f_over_fnr_err",
                    "fs_over_fnr",
                    "fs_over_fnr_err",
                    "f_sp_minus_over_fnr",
                    "f_sp_minus_over_fnr_err",
                    "f_sp_plus_over_fnr",
                    "f_sp_plus_over_fnr_err",
                ]
                .iter()
                .map(|s| s.to_string())
                .collect()
            };
            let data_rows = rows
                .into_iter()
                .map(|(a, f, fnr, sp)| {
                    let fnr_v = fnr.as_ref().map(|p| p.value);
                    let ratio = |v: Option<f64>, e: Option<f64>| -> (Option<f64>, Option<f64>) {
                        match (v, e, fnr_v) {
                            (Some(v), Some(e), Some(n)) => (Some(v / n), Some(e / n.abs())),
                            _ => (None, None),
                        }
                    };
                    let (fv, fe) = (f.as_ref().map(|p| p.value), f.as_ref().map(|p| p.error_estimate));
                    let (sv, se) = (
                        sp.as_ref().map(|m| m.total),
                        sp.as_ref().map(|m| m.error_estimate),
                    );
                    let minus = sp.as_ref().map(|m| m.branches[0]);
                    let plus = sp.as_ref().map(|m| m.branches[1]);
                    let (f_r, f_re) = ratio(fv, fe);
                    let (s_r, s_re) = ratio(sv, se);
                    if fig == FigureId::Fig2 {
                        vec![Some(a), f_r, f_re, s_r, s_re]
                    } else {
                        let (mv, me) = (
                            minus.map(|b| b.value),
                            minus.map(|b| b.error_estimate),
                        );
                        let (pv, pe) = (plus.map(|b| b.value), plus.map(|b| b.error_estimate));
                        let (m_r, m_re) = ratio(mv, me);
                        let (p_r, p_re) = ratio(pv, pe);
                        vec![
                            Some(a),
                            fv,
                            fe,
                            sv,
                            se,
                            mv,
                            me,
                            pv,
                            pe,
                            f_r,
                            f_re,
                            s_r,
                            s_re,
                            m_r,
                            m_re,
                            p_r,
                            p_re,
                        ]
                    }
                })
                .collect();
            Ok(Dataset {
                invocation,
                xscale_log: true,
                header,
                rows: data_rows,
            })
        }
        FigureId::Fig4 => {
            // F/F_C vs k_P ds for slab-mirror gaps 0, 0.01, 0.1, 1 and inf.
            let grid = log_grid(1e-2, 5.0, FIGURE_POINTS);
            let gaps: [Option<f64>; 5] = [Some(0.0), Some(0.01), Some(0.1), Some(1.0), None];
            let rows = par_map(grid.len(), workers, |i| {
                let ds = grid[i];
                let fc = pressure::casimir_pressure(ds);
                let mut row: Vec<Option<f64>> = vec![Some(ds)];
                for gap in gaps {
                    let result = match gap {
                        Some(0.0) => pressure::pressure_mirrors_bessel(ds).ok(),
                        Some(d) => SlabSystem::cavity(ds, d)
                            .and_then(|sys| pressure::pressure_cavity_with(&sys, &quad))
                            .ok(),
                        None => pressure::pressure_free_with(ds, &quad).ok(),
                    };
                    row.push(result.as_ref().map(|p| p.value / fc));
                    row.push(result.as_ref().map(|p| p.error_estimate / fc.abs()));
                }
                row
            });
            let header = vec![
                "kp_ds".to_string(),
                "f_over_fc_gap0".to_string(),
                "f_over_fc_gap0_err".to_string(),
                "f_over_fc_gap0.01".to_string(),
                "f_over_fc_gap0.01_err".to_string(),
                "f_over_fc_gap0.1".to_string(),
                "f_over_fc_gap0.1_err".to_string(),
                "f_over_fc_gap1".to_string(),
                "f_over_fc_gap1_err".to_string(),
                "f_over_fc_gapinf".to_string(),
                "f_over_fc_gapinf_err".to_string(),
            ];
            Ok(Dataset {
                invocation,
                xscale_log: true,
                header,
                rows,
            })
        }
        FigureId::Fig5 => {
            // F/F_C vs k_P d for slab thicknesses 0.01, 0.1, 1, 2.
            let grid = log_grid(1e-3, 5.0, FIGURE_POINTS);
            let thicknesses = [0.01, 0.1, 1.0, 2.0];
            let rows = par_map(grid.len(), workers, |i| {
                let d = grid[i];
                let mut row: Vec<Option<f64>> = vec![Some(d)];
                for ds in thicknesses {
                    let fc = pressure::casimir_pressure(ds);
                    let result = SlabSystem::cavity(ds, d)
                        .and_then(|sys| pressure::pressure_cavity_with(&sys, &quad))
                        .ok();
                    row.push(result.as_ref().map(|p| p.value / fc));
                    row.push(result.as_ref().map(|p| p.error_estimate / fc.abs()));
                }
                row
            });
            let header = vec![
                "kp_d".to_string(),
                "f_over_fc_ds0.01".to_string(),
                "f_over_fc_ds0.01_err".to_string(),
                "f_over_fc_ds0.1".to_string(),
                "f_over_fc_ds0.1_err".to_string(),
                "f_over_fc_ds1".to_string(),
                "f_over_fc_ds1_err".to_string(),
                "f_over_fc_ds2".to_string(),
                "f_over_fc_ds2_err".to_string(),
            ];
            Ok(Dataset {
                invocation,
                xscale_log: true,
                header,
                rows,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// CSV parsing and SVG plotting
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct ParsedCsv {
    xscale_log: bool,
    header: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

fn parse_csv(path: &str, text: &str) -> Result<ParsedCsv, CliError> {
    let mut xscale_log = false;
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(scale) = comment.trim().strip_prefix("xscale:") {
                xscale_log = scale.trim() == "log";
            }
            continue;
        }
        match &header {
            None => {
                header = Some(trimmed.split(',').map(|s| s.trim().to_string()).collect());
            }
            Some(h) => {
                let cells: Vec<&str> = trimmed.split(',').collect();
                if cells.len() < h.len() {
                    return Err(CliError::Parse {
                        path: path.to_string(),
                        line: lineno,
                        message: format!("expected {} columns, found {}", h.len(), cells.len()),
                    });
                }
                let mut row = Vec::with_capacity(h.len());
                for (ci, cell) in cells.iter().take(h.len()).enumerate() {
                    let cell = cell.trim();
                    if cell == "nan" || cell.is_empty() {
                        row.push(None);
                    } else {
                        match cell.parse::<f64>() {
                            Ok(v) if v.is_finite() => row.push(Some(v)),
                            Ok(_) => row.push(None),
                            Err(_) => {
                                // Non-numeric metadata columns (formula,
                                // status) only make sense after the
                                // numeric block; treat them as absent.
                                if ci >= 1 {
                                    row.push(None);
                                } else {
                                    return Err(CliError::Parse {
                                        path: path.to_string(),
                                        line: lineno,
                                        message: format!("axis cell '{cell}' is not a number"),
                                    });
                                }
                            }
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    let header = header.ok_or(CliError::EmptyDataset)?;
    if rows.is_empty() {
        return Err(CliError::EmptyDataset);
    }
    Ok(ParsedCsv {
        xscale_log,
        header,
        rows,
    })
}

const SVG_PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Render a CSV produced by this tool into a deterministic SVG: one
/// polyline per value column, log or linear x per the dataset hint.
pub fn emit_plot(csv_path: &str, svg_path: &str) -> Result<(), CliError> {
    let text = std::fs::read_to_string(csv_path).map_err(|source| CliError::Io {
        path: csv_path.to_string(),
        source,
    })?;
    let parsed = parse_csv(csv_path, &text)?;
    let svg = render_svg(&parsed)?;
    std::fs::write(svg_path, svg).map_err(|source| CliError::Io {
        path: svg_path.to_string(),
        source,
    })
}

fn render_svg(data: &ParsedCsv) -> Result<String, CliError> {
    // Curve columns: every non-axis column that is not an error column and
    // not row metadata.
    let curve_cols: Vec<usize> = (1..data.header.len())
        .filter(|&i| {
            let name = &data.header[i];
            !name.ends_with("_err")
                && name != "error_estimate"
                && name != "formula"
                && name != "status"
        })
        .collect();
    if curve_cols.is_empty() {
        return Err(CliError::EmptyDataset);
    }

    let xs: Vec<f64> = data
        .rows
        .iter()
        .filter_map(|r| r.first().copied().flatten())
        .collect();
    if xs.is_empty() {
        return Err(CliError::EmptyDataset);
    }
    let xmap = |x: f64| if data.xscale_log { x.ln() } else { x };
    let (xmin, xmax) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(xmap(x)), hi.max(xmap(x)))
        });
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for row in &data.rows {
        for &c in &curve_cols {
            if let Some(Some(y)) = row.get(c) {
                ymin = ymin.min(*y);
                ymax = ymax.max(*y);
            }
        }
    }
    if !ymin.is_finite() || !ymax.is_finite() {
        return Err(CliError::EmptyDataset);
    }
    let ypad = (ymax - ymin).abs().max(1e-12) * 0.05;
    let (ymin, ymax) = (ymin - ypad, ymax + ypad);
    let xspan = (xmax - xmin).max(1e-12);

    const W: f64 = 800.0;
    const H: f64 = 560.0;
    const ML: f64 = 70.0;
    const MR: f64 = 20.0;
    const MT: f64 = 20.0;
    const MB: f64 = 50.0;
    let px = |x: f64| ML + (xmap(x) - xmin) / xspan * (W - ML - MR);
    let py = |y: f64| H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#
    );
    // Frame.
    let _ = writeln!(
        svg,
        r#"<rect x="{ML}" y="{MT}" width="{:.2}" height="{:.2}" fill="none" stroke="black" stroke-width="1"/>"#,
        W - ML - MR,
        H - MT - MB
    );
    for (k, &c) in curve_cols.iter().enumerate() {
        let color = SVG_PALETTE[k % SVG_PALETTE.len()];
        let mut points = String::new();
        for row in &data.rows {
            if let (Some(Some(x)), Some(Some(y))) = (row.first(), row.get(c)) {
                let _ = write!(points, "{:.2},{:.2} ", px(*x), py(*y));
            }
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
        // Legend entry.
        let ly = MT + 18.0 + 16.0 * k as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"/>"#,
            ML + 10.0,
            ML + 34.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12">{}</text>"#,
            ML + 40.0,
            ly + 4.0,
            data.header[c]
        );
    }
    // Axis annotations: end-point tick labels and the axis name.
    let xlo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let xhi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let _ = writeln!(
        svg,
        r#"<text x="{ML:.2}" y="{:.2}" font-family="monospace" font-size="12">{xlo:.3e}</text>"#,
        H - MB + 18.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="end">{xhi:.3e}</text>"#,
        W - MR,
        H - MB + 18.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="middle">{}{}</text>"#,
        (ML + W - MR) / 2.0,
        H - MB + 36.0,
        data.header[0],
        if data.xscale_log { " (log)" } else { "" }
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12">{ymax:.3e}</text>"#,
        4.0,
        MT + 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12">{ymin:.3e}</text>"#,
        4.0,
        H - MB
    );
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

// ---------------------------------------------------------------------------
// Config file: key=value lines, '#' comments.
// ---------------------------------------------------------------------------

pub fn read_config(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut map = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match trimmed.split_once('=') {
            Some((k, v)) => {
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
            None => {
                return Err(CliError::Parse {
                    path: path.display().to_string(),
                    line: idx + 1,
                    message: "expected key=value".to_string(),
                });
            }
        }
    }
    Ok(map)
}

pub fn parse_mirrors(s: &str) -> Result<MirrorModel, CliError> {
    match s {
        "none" => Ok(MirrorModel::None),
        "perfect" => Ok(MirrorModel::Perfect),
        other => Err(CliError::UnknownMirror(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let r = SweepRange::parse("0.01:10:5:log").unwrap();
        assert_eq!(r.points, 5);
        assert!(r.log);
        let g = r.grid();
        assert_eq!(g.len(), 5);
        assert!((g[0] - 0.01).abs() < 1e-15);
        assert!((g[4] - 10.0).abs() < 1e-12);
        // Log grid: constant ratio.
        let ratio = g[1] / g[0];
        for w in g.windows(2) {
            assert!((w[1] / w[0] - ratio).abs() < 1e-9);
        }

        assert!(SweepRange::parse("1:0:5:log").is_err());
        assert!(SweepRange::parse("0:1:1:lin").is_err());
        assert!(SweepRange::parse("0:1:5").is_err());
        assert!(SweepRange::parse("0:1:5:banana").is_err());
    }

    #[test]
    fn quantity_parsing() {
        let q = QuantitySpec::parse("F_cavity/F_C").unwrap();
        assert_eq!(q.numerator, Quantity::FCavity);
        assert_eq!(q.denominator, Some(Quantity::FC));
        assert!(QuantitySpec::parse("F_bogus").is_err());
    }

    #[test]
    fn par_map_preserves_order() {
        let out = par_map(100, 8, |i| i * i);
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn sweep_interaction_symmetric_is_zero_and_deterministic() {
        let spec = SweepSpec {
            quantity: QuantitySpec::parse("F_interaction").unwrap(),
            axis: Axis::Gap,
            range: SweepRange::parse("0.2:1.0:5:lin").unwrap(),
            ds: 0.5,
            gap1: None,
            gap2: None,
            mirrors: MirrorModel::Perfect,
            quad: QuadratureSpec::default(),
            workers: 4,
            invocation: "test".to_string(),
        };
        let result = run_sweep(&spec);
        assert!(!result.any_failed);
        for row in &result.rows {
            assert!(row.value.unwrap().abs() < 1e-10);
        }
        let again = run_sweep(&spec);
        assert_eq!(result.to_csv(), again.to_csv());
    }

    #[test]
    fn sweep_records_per_point_failures() {
        // Interaction force with an absent mirror fails per point but the
        // sweep itself completes.
        let spec = SweepSpec {
            quantity: QuantitySpec::parse("F_interaction").unwrap(),
            axis: Axis::Ds,
            range: SweepRange::parse("0.1:1.0:3:lin").unwrap(),
            ds: 0.5,
            gap1: None,
            gap2: None,
            mirrors: MirrorModel::None,
            quad: QuadratureSpec::default(),
            workers: 1,
            invocation: "test".to_string(),
        };
        let result = run_sweep(&spec);
        assert!(result.any_failed);
        assert_eq!(result.rows.len(), 3);
        for row in &result.rows {
            assert!(row.value.is_none());
            assert!(row.status.contains("mirrors"));
        }
        let csv = result.to_csv();
        assert!(csv.contains("nan"));
    }

    #[test]
    fn csv_roundtrip_and_plot_structure() {
        let ds = Dataset {
            invocation: "casimir-slab figure test".to_string(),
            xscale_log: true,
            header: vec![
                "x".to_string(),
                "a".to_string(),
                "a_err".to_string(),
                "b".to_string(),
                "b_err".to_string(),
            ],
            rows: vec![
                vec![Some(0.1), Some(1.0), Some(0.01), Some(2.0), Some(0.01)],
                vec![Some(1.0), Some(0.5), Some(0.01), None, None],
                vec![Some(10.0), Some(0.25), Some(0.01), Some(1.0), Some(0.01)],
            ],
        };
        let csv = ds.to_csv();
        let parsed = parse_csv("test.csv", &csv).unwrap();
        assert!(parsed.xscale_log);
        assert_eq!(parsed.header.len(), 5);
        assert_eq!(parsed.rows.len(), 3);
        let svg = render_svg(&parsed).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(render_svg(&parsed).unwrap(), svg);
    }

    #[test]
    fn empty_csv_is_an_error() {
        assert!(matches!(
            parse_csv("empty.csv", "# nothing\n"),
            Err(CliError::EmptyDataset)
        ));
        assert!(matches!(
            parse_csv("empty.csv", "x,y\n"),
            Err(CliError::EmptyDataset)
        ));
    }

    #[test]
    fn malformed_csv_reports_line() {
        let err = parse_csv("bad.csv", "x,y\n1.0\n").unwrap_err();
        match err {
            CliError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn config_parsing() {
        let dir = std::env::temp_dir().join("casimir_slab_cfg_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("config.txt");
        std::fs::write(&path, "# comment\nrel-tol = 1e-7\nworkers=3\n").unwrap();
        let map = read_config(&path).unwrap();
        assert_eq!(map.get("rel-tol").unwrap(), "1e-7");
        assert_eq!(map.get("workers").unwrap(), "3");

        std::fs::write(&path, "not a pair\n").unwrap();
        assert!(read_config(&path).is_err());
    }
}
