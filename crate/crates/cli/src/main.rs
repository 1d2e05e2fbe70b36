//! `spinor-gordon`: run the verification scenarios over a spacetime grid,
//! export built-in families as tabulated files, and check tabulated files
//! back in.
//!
//! Exit codes: 0 all scenarios pass, 1 usage or configuration error,
//! 2 at least one scenario failed.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use spinor_gordon::scenarios::{
    classify_ghost, run_named_scenario, FAMILY_NAMES, SCENARIO_NAMES, TOLERANCE_DEFAULTS,
};
use spinor_gordon::{Grid, PhysicalParams, SpacetimePoint, Tolerances};
use spinor_gordon_cli::config::{
    parse_config_file, parse_f64_list, parse_tol, parse_usize_list, resolve, ConfigError,
    Overrides, RunSettings,
};
use spinor_gordon_cli::report::{render_report, render_summary, render_verdict};
use spinor_gordon_cli::tabulated::TabulatedField;
use spinor_gordon_cli::CONFIG_ENV_VAR;

#[derive(Parser)]
#[command(
    name = "spinor-gordon",
    version,
    about = "Gordon-decomposition and ghost-spinor verification over spacetime grids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification scenarios and write one report per scenario plus a summary
    Run(RunArgs),
    /// List scenario names, built-in families, and tolerance labels
    ListScenarios,
    /// Sample a built-in family onto a grid and write a tabulated-field file
    ExportField(ExportArgs),
    /// Validate a tabulated-field file and classify it over its interior grid
    IngestCheck(IngestArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Grid corners: lo0,lo1,lo2,lo3,hi0,hi1,hi2,hi3
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Samples per axis: n0,n1,n2,n3
    #[arg(long = "grid-counts")]
    grid_counts: Option<String>,
    /// Mass of the field under study
    #[arg(long)]
    m: Option<f64>,
    /// Reduced Planck constant
    #[arg(long)]
    hbar: Option<f64>,
    /// Speed of light
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario name or "all"; repeat the flag to run several
    #[arg(long = "scenario")]
    scenarios: Vec<String>,
    #[command(flatten)]
    grid: GridArgs,
    /// Tolerance override, label=value; repeatable
    #[arg(long = "tol")]
    tols: Vec<String>,
    /// Report format
    #[arg(long)]
    format: Option<String>,
    /// Report directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluate grid points in parallel
    #[arg(long)]
    parallel: bool,
    /// Flat key = value config file (falls back to $SPINOR_GORDON_CONFIG)
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    /// Built-in family name
    #[arg(long)]
    family: String,
    #[command(flatten)]
    grid: GridArgs,
    /// Output file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IngestArgs {
    /// Tabulated-field file to check
    path: PathBuf,
    /// Reduced Planck constant used for the classification
    #[arg(long)]
    hbar: Option<f64>,
    /// Speed of light used for the classification
    #[arg(long)]
    c: Option<f64>,
    /// Write the verdict JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are not usage errors.
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::ListScenarios => cmd_list(),
        Command::ExportField(args) => cmd_export(args),
        Command::IngestCheck(args) => cmd_ingest(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
    #[error(transparent)]
    Scenario(#[from] spinor_gordon::ScenarioError),
    #[error(transparent)]
    Field(#[from] spinor_gordon::fields::FieldError),
    #[error(transparent)]
    Tabulated(#[from] spinor_gordon_cli::TabulatedError),
}

fn io_ctx(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    move |source| CliError::Io { context: context.into(), source }
}

fn grid_overrides(args: &GridArgs) -> Result<Overrides, ConfigError> {
    Ok(Overrides {
        grid_corners: args.grid.as_deref().map(|s| parse_f64_list::<8>(s, "grid")).transpose()?,
        grid_counts: args
            .grid_counts
            .as_deref()
            .map(|s| parse_usize_list::<4>(s, "grid-counts"))
            .transpose()?,
        m: args.m,
        hbar: args.hbar,
        c: args.c,
        ..Default::default()
    })
}

fn run_settings(args: &RunArgs) -> Result<RunSettings, CliError> {
    let mut flags = grid_overrides(&args.grid)?;
    if !args.scenarios.is_empty() {
        flags.scenarios = Some(args.scenarios.clone());
    }
    for tol in &args.tols {
        flags.tols.push(parse_tol(tol)?);
    }
    flags.format = args.format.as_deref().map(str::parse).transpose()?;
    flags.out = args.out.clone();
    if args.parallel {
        flags.parallel = Some(true);
    }

    let config_path = args
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV_VAR).map(PathBuf::from));
    let file_layer = match config_path {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(io_ctx(format!("reading config {}", path.display())))?;
            Some(parse_config_file(&text)?)
        }
        None => None,
    };
    Ok(resolve(file_layer, flags)?)
}

fn cmd_run(args: RunArgs) -> Result<u8, CliError> {
    let settings = run_settings(&args)?;
    fs::create_dir_all(&settings.out_dir)
        .map_err(io_ctx(format!("creating {}", settings.out_dir.display())))?;

    let mut reports = Vec::new();
    for name in &settings.scenarios {
        let report = run_named_scenario(
            name,
            &settings.grid,
            &settings.params,
            &settings.tolerances,
            settings.parallel,
        )?;
        let path = settings.out_dir.join(format!("{name}.{}", settings.format.extension()));
        fs::write(&path, render_report(&report, settings.format))
            .map_err(io_ctx(format!("writing {}", path.display())))?;
        println!(
            "{name}: {} ({} metrics, {} failed) [{:.3}s] -> {}",
            if report.overall { "PASS" } else { "FAIL" },
            report.metrics.len(),
            report.failed_metrics().count(),
            report.runtime_seconds,
            path.display()
        );
        reports.push(report);
    }

    let summary_path = settings.out_dir.join(format!("summary.{}", settings.format.extension()));
    fs::write(&summary_path, render_summary(&reports, settings.format))
        .map_err(io_ctx(format!("writing {}", summary_path.display())))?;
    println!("summary -> {}", summary_path.display());

    if reports.iter().all(|r| r.overall) {
        Ok(0)
    } else {
        Ok(2)
    }
}

fn cmd_list() -> Result<u8, CliError> {
    println!("scenarios:");
    let blurbs = [
        ("gordon-identity", "current = convection + spin for every massive built-in"),
        ("theorem1", "light-front iff: ghost exactly when g = a*f"),
        ("theorem2", "ghost displacement current vanishes everywhere"),
        ("proposition1", "ghost verdicts, necessity condition, trace identity"),
        ("superposition", "displacement current splits into free + interference parts"),
    ];
    for (name, blurb) in blurbs {
        debug_assert!(SCENARIO_NAMES.contains(&name));
        println!("  {name:<16} {blurb}");
    }
    println!("\nfield families (export-field --family):");
    for name in FAMILY_NAMES {
        println!("  {name}");
    }
    println!("\ntolerance labels (--tol label=value):");
    for (label, default, what) in TOLERANCE_DEFAULTS {
        println!("  {label:<28} {default:<8e} {what}");
    }
    Ok(0)
}

fn cmd_export(args: ExportArgs) -> Result<u8, CliError> {
    let over = grid_overrides(&args.grid)?;
    let corners = over.grid_corners.unwrap_or([-2.0, -2.0, -2.0, -2.0, 2.0, 2.0, 2.0, 2.0]);
    let counts = over.grid_counts.unwrap_or([9, 5, 5, 9]);
    let grid = Grid::new(
        SpacetimePoint::new(corners[0], corners[1], corners[2], corners[3]),
        SpacetimePoint::new(corners[4], corners[5], corners[6], corners[7]),
        counts,
    )?;
    let params = PhysicalParams::new(
        over.hbar.unwrap_or(1.0),
        over.c.unwrap_or(1.0),
        over.m.unwrap_or(1.0),
    )?;
    let field = spinor_gordon::scenarios::builtin_family(&args.family, &params)?;
    let tab = TabulatedField::from_field(&field, &grid)?;
    tab.save(&args.out)?;
    println!(
        "exported {} on {} points -> {}",
        field.label(),
        grid.len(),
        args.out.display()
    );
    Ok(0)
}

fn cmd_ingest(args: IngestArgs) -> Result<u8, CliError> {
    let tab = TabulatedField::load(&args.path)?;
    let interior = tab.interior_grid()?;
    let mass = tab.mass;
    let field = tab.into_field()?;
    let params = PhysicalParams::new(args.hbar.unwrap_or(1.0), args.c.unwrap_or(1.0), mass)?;
    let verdict = classify_ghost(&field, &interior, &params, &Tolerances::default(), false)?;
    println!(
        "{}: solution={} ghost={} (sup|T|={:.3e}, sup|psi+psi|={:.3e}, max|j|={:.3e})",
        args.path.display(),
        verdict.is_solution,
        verdict.is_ghost,
        verdict.sup_stress,
        verdict.sup_bilinear,
        verdict.max_current
    );
    let rendered = render_verdict(field.label(), &verdict);
    match &args.out {
        Some(path) => fs::write(path, rendered)
            .map_err(io_ctx(format!("writing {}", path.display())))?,
        None => print!("{rendered}"),
    }
    Ok(0)
}
