use casimir_slab::cli::{
    self, Axis, CliError, FigureId, QuantitySpec, SweepRange, SweepSpec,
};
use casimir_slab::medium::MirrorModel;
use casimir_slab::quadrature::QuadratureSpec;
use casimir_slab::verify;
use clap::{Args, Parser, Subcommand};
use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Vacuum-field pressure on a free-electron metal slab, free-standing or
/// inside an ideal planar cavity, in reduced units (lengths in 1/k_P,
/// pressures in hbar c k_P^4).
#[derive(Parser)]
#[command(name = "casimir-slab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one quantity at a single parameter point.
    Pressure(PointArgs),
    /// Sweep a quantity over a parameter grid and emit CSV.
    Sweep(SweepArgs),
    /// Regenerate one of the published figure datasets as CSV.
    Figure(FigureArgs),
    /// Render a CSV produced by this tool into an SVG plot.
    Plot {
        /// Input CSV path.
        csv: PathBuf,
        /// Output SVG path.
        svg: PathBuf,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    Verify {
        /// Run a single criterion (1-10) instead of all.
        #[arg(long)]
        criterion: Option<usize>,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Reduced slab thickness k_P d_s.
    #[arg(long)]
    ds: Option<f64>,
    /// Symmetric slab-mirror gap k_P d (sets both sides; "inf" allowed).
    #[arg(long)]
    gap: Option<String>,
    /// Left slab-mirror gap.
    #[arg(long)]
    gap1: Option<f64>,
    /// Right slab-mirror gap.
    #[arg(long)]
    gap2: Option<f64>,
    /// Mirror model: none or perfect.
    #[arg(long)]
    mirrors: Option<String>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Worker threads for grid evaluation.
    #[arg(long)]
    workers: Option<usize>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Configuration file (key=value lines; flags take precedence).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct PointArgs {
    /// Quantity to evaluate (e.g. F_free, F_cavity, F_cavity/F_C).
    #[arg(long)]
    quantity: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Quantity to sweep.
    #[arg(long)]
    quantity: Option<String>,
    /// Sweep axis: ds or d.
    #[arg(long)]
    axis: Option<String>,
    /// Grid as min:max:points:log|lin.
    #[arg(long)]
    range: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct FigureArgs {
    /// One of fig2, fig3, fig4, fig5.
    figure: String,
    #[command(flatten)]
    common: CommonArgs,
}

/// Settings resolved with precedence: built-in defaults < config file <
/// command-line flags.
struct Resolved {
    ds: f64,
    gap1: Option<f64>,
    gap2: Option<f64>,
    mirrors: MirrorModel,
    quad: QuadratureSpec,
    workers: usize,
    out: Option<PathBuf>,
}

fn parse_gap(value: &str) -> Result<f64, CliError> {
    if value == "inf" {
        return Ok(f64::INFINITY);
    }
    value
        .parse()
        .map_err(|_| CliError::InvalidRange(format!("gap '{value}' is not a number")))
}

fn resolve(common: &CommonArgs) -> Result<Resolved, CliError> {
    let config: HashMap<String, String> = match &common.config {
        Some(path) => cli::read_config(path)?,
        None => HashMap::new(),
    };
    let from_config = |key: &str| config.get(key).cloned();
    let parse_f64 = |s: String, what: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::InvalidRange(format!("{what} '{s}' is not a number")))
    };

    let ds = match common.ds {
        Some(v) => v,
        None => match from_config("ds") {
            Some(s) => parse_f64(s, "ds")?,
            None => 1.0,
        },
    };
    let gap_shared = match common.gap.clone().or_else(|| from_config("gap")) {
        Some(s) => Some(parse_gap(&s)?),
        None => None,
    };
    let gap1 = common.gap1.or(gap_shared);
    let gap2 = common.gap2.or(gap_shared);
    let mirrors_str = common
        .mirrors
        .clone()
        .or_else(|| from_config("mirrors"))
        .unwrap_or_else(|| {
            if gap1.is_some() || gap2.is_some() {
                "perfect".to_string()
            } else {
                "none".to_string()
            }
        });
    let mirrors = cli::parse_mirrors(&mirrors_str)?;
    let rel_tol = match common.rel_tol {
        Some(v) => v,
        None => match from_config("rel-tol") {
            Some(s) => parse_f64(s, "rel-tol")?,
            None => QuadratureSpec::default().rel_tol,
        },
    };
    let workers = match common.workers {
        Some(v) => v,
        None => match from_config("workers") {
            Some(s) => s
                .parse()
                .map_err(|_| CliError::InvalidRange(format!("workers '{s}' is not a count")))?,
            None => 1,
        },
    };
    let out = common
        .out
        .clone()
        .or_else(|| from_config("out").map(PathBuf::from));
    Ok(Resolved {
        ds,
        gap1,
        gap2,
        mirrors,
        quad: QuadratureSpec {
            rel_tol,
            ..Default::default()
        },
        workers: workers.max(1),
        out,
    })
}

fn write_output(out: &Option<PathBuf>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, contents).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{contents}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn invocation_string() -> String {
    let args: Vec<String> = std::env::args().collect();
    args.join(" ")
}

const EXIT_NUMERICAL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn run() -> Result<u8, CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Pressure(args) => {
            let resolved = resolve(&args.common)?;
            let name = args.quantity.as_deref().unwrap_or("F_cavity");
            let quantity = QuantitySpec::parse(name)?;
            let spec = SweepSpec {
                quantity,
                axis: Axis::Ds,
                range: SweepRange {
                    min: resolved.ds,
                    max: resolved.ds * 2.0,
                    points: 2,
                    log: false,
                },
                ds: resolved.ds,
                gap1: resolved.gap1,
                gap2: resolved.gap2,
                mirrors: resolved.mirrors,
                quad: resolved.quad,
                workers: 1,
                invocation: invocation_string(),
            };
            let row = cli::evaluate_point(&spec);
            match row.value {
                Some(v) => {
                    println!(
                        "{name} = {v:.11e} +/- {:.2e}  [{}]  (ds = {}, mirrors = {:?})",
                        row.error_estimate.unwrap_or(f64::NAN),
                        row.formula,
                        resolved.ds,
                        resolved.mirrors,
                    );
                    Ok(0)
                }
                None => {
                    eprintln!("evaluation failed: {}", row.status);
                    Ok(EXIT_NUMERICAL)
                }
            }
        }
        Command::Sweep(args) => {
            let resolved = resolve(&args.common)?;
            let quantity = QuantitySpec::parse(args.quantity.as_deref().unwrap_or("F_free"))?;
            let axis = Axis::parse(args.axis.as_deref().unwrap_or("ds"))?;
            let range = SweepRange::parse(args.range.as_deref().unwrap_or("0.01:10:21:log"))?;
            let spec = SweepSpec {
                quantity,
                axis,
                range,
                ds: resolved.ds,
                gap1: resolved.gap1,
                gap2: resolved.gap2,
                mirrors: resolved.mirrors,
                quad: resolved.quad,
                workers: resolved.workers,
                invocation: invocation_string(),
            };
            let result = cli::run_sweep(&spec);
            write_output(&resolved.out, &result.to_csv())?;
            Ok(if result.any_failed { EXIT_NUMERICAL } else { 0 })
        }
        Command::Figure(args) => {
            let resolved = resolve(&args.common)?;
            let fig = FigureId::parse(&args.figure)?;
            let dataset = cli::fig_dataset(fig, resolved.workers)?;
            let any_failed = dataset
                .rows
                .iter()
                .any(|row| row.iter().any(|cell| cell.is_none()));
            write_output(&resolved.out, &dataset.to_csv())?;
            Ok(if any_failed { EXIT_NUMERICAL } else { 0 })
        }
        Command::Plot { csv, svg } => {
            cli::emit_plot(&csv.display().to_string(), &svg.display().to_string())?;
            Ok(0)
        }
        Command::Verify { criterion } => {
            let outcomes = match criterion {
                Some(id) => vec![verify::run_criterion(id)],
                None => verify::run_all(),
            };
            let mut all_passed = true;
            for outcome in &outcomes {
                println!("{}", outcome.line());
                all_passed &= outcome.passed;
            }
            println!(
                "{}/{} criteria passed",
                outcomes.iter().filter(|o| o.passed).count(),
                outcomes.len()
            );
            Ok(if all_passed { 0 } else { EXIT_NUMERICAL })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                CliError::Pressure(_) => EXIT_NUMERICAL,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}
