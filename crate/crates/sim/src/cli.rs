//! The `beg` command line.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use beg_core::theory;
use clap::{Args, Parser, Subcommand};

use crate::config::{
    geometric_factors, AlphaSpec, BisectionSpec, ExperimentConfig, VariantKind, DEFAULT_MAX_ITERS,
    DEFAULT_TARGET_FRACTION,
};
use crate::error::{Result, SimError};
use crate::experiment::{estimate_critical_alpha, run_grid, ResultRow};
use crate::grid::{FloatList, SizeList};
use crate::output::{self, CriticalSummary, Manifest};

#[derive(Debug, Parser)]
#[command(
    name = "beg",
    version,
    about = "Capacity calculator and Monte Carlo stability experiments for the ternary BEG-type memory"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the analytic capacity curve α*(γ).
    Theory(TheoryArgs),
    /// Run a grid of (N, γ, α) cells.
    Simulate(SimulateArgs),
    /// Sweep loads relative to α*(γ) for each γ.
    Scan(ScanArgs),
    /// Bisect on α for the empirical critical load.
    Critical(CriticalArgs),
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    /// γ grid, each value in (0, 2]; comma list or lo:hi:step.
    #[arg(long, value_name = "GRID", default_value = "0.1:2.0:0.1")]
    pub gamma: FloatList,
    /// Output CSV.
    #[arg(long, value_name = "PATH", default_value = "theory.csv")]
    pub out: PathBuf,
}

/// Flags shared by every Monte Carlo subcommand.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// Neuron counts, comma list or lo:hi:step (required).
    #[arg(long = "N", value_name = "LIST")]
    pub n: SizeList,
    /// Fresh pattern sets per cell.
    #[arg(long, default_value_t = crate::config::DEFAULT_TRIALS)]
    pub trials: usize,
    /// Stored patterns tested per pattern set.
    #[arg(long, default_value_t = 1)]
    pub patterns_per_set: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Largest M·N allowed for a single pattern set.
    #[arg(long, default_value_t = beg_core::pattern::DEFAULT_CELL_BUDGET as u64)]
    pub cell_budget: u64,
    /// Write measured wall-clock seconds instead of 0 [default: off].
    #[arg(long)]
    pub timing: bool,
}

impl RunArgs {
    fn config(&self, variant: VariantKind, gamma: Vec<f64>, alpha: AlphaSpec) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(variant, self.n.0.clone(), gamma, alpha);
        c.trials = self.trials;
        c.patterns_per_set = self.patterns_per_set;
        c.master_seed = self.seed;
        c.threads = self.threads;
        c.cell_budget = self.cell_budget;
        c
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Dynamics variant.
    #[arg(long, value_enum, default_value_t = VariantKind::Thresholded)]
    pub variant: VariantKind,
    /// Threshold coefficients; ignored by the original variant.
    #[arg(long, value_name = "LIST", default_value = "1")]
    pub gamma: FloatList,
    /// Loads α, comma list or lo:hi:step (required).
    #[arg(long, value_name = "LIST")]
    pub alpha: FloatList,
    /// Results CSV.
    #[arg(long, value_name = "PATH", default_value = "results.csv")]
    pub out: PathBuf,
    /// Run manifest (JSON).
    #[arg(long, value_name = "PATH", default_value = "results.manifest.json")]
    pub manifest: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Threshold coefficients, each in (0, 2].
    #[arg(long, value_name = "LIST", default_value = "1.5")]
    pub gamma: FloatList,
    /// Smallest load as a multiple of α*(γ).
    #[arg(long, default_value_t = 0.1)]
    pub from: f64,
    /// Largest load as a multiple of α*(γ).
    #[arg(long, default_value_t = 10.0)]
    pub to: f64,
    /// Number of log-spaced loads between --from and --to.
    #[arg(long, default_value_t = 8)]
    pub points: usize,
    /// Results CSV.
    #[arg(long, value_name = "PATH", default_value = "scan.csv")]
    pub out: PathBuf,
    /// Run manifest (JSON).
    #[arg(long, value_name = "PATH", default_value = "scan.manifest.json")]
    pub manifest: PathBuf,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Dynamics variant.
    #[arg(long, value_enum, default_value_t = VariantKind::Thresholded)]
    pub variant: VariantKind,
    /// Threshold coefficients; ignored by the original variant.
    #[arg(long, value_name = "LIST", default_value = "2")]
    pub gamma: FloatList,
    /// Lower end of the load bracket (required).
    #[arg(long)]
    pub lo: f64,
    /// Upper end of the load bracket (required).
    #[arg(long)]
    pub hi: f64,
    /// Unstable fraction that defines the critical load.
    #[arg(long, default_value_t = DEFAULT_TARGET_FRACTION)]
    pub target: f64,
    /// Maximum number of bisection steps.
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    /// CSV of every evaluated cell.
    #[arg(long, value_name = "PATH", default_value = "critical_rows.csv")]
    pub out: PathBuf,
    /// Summary JSON with one critical load per (N, γ).
    #[arg(long, value_name = "PATH", default_value = "critical.json")]
    pub summary: PathBuf,
    /// Run manifest (JSON).
    #[arg(long, value_name = "PATH", default_value = "critical.manifest.json")]
    pub manifest: PathBuf,
}

fn path_string(p: &std::path::Path) -> String {
    p.to_string_lossy().into_owned()
}

fn print_rows(rows: &[ResultRow]) {
    println!(
        "{:>8} {:>8} {:>12} {:>10} {:>9} {:>21}",
        "N", "gamma", "alpha", "M", "unstable", "95% CI"
    );
    for r in rows {
        println!(
            "{:>8} {:>8} {:>12} {:>10} {:>9.4} [{:.4}, {:.4}]",
            r.n,
            output::format_g9(r.gamma),
            output::format_g9(r.alpha),
            r.m,
            r.unstable_fraction,
            r.ci_lo,
            r.ci_hi
        );
    }
}

fn cmd_theory(args: &TheoryArgs) -> Result<()> {
    let points = args
        .gamma
        .0
        .iter()
        .map(|&g| {
            if !(g > 0.0 && g <= 2.0) {
                return Err(SimError::Config(format!("gamma = {g} lies outside (0, 2]")));
            }
            Ok(theory::theory_point(g)?)
        })
        .collect::<Result<Vec<_>>>()?;
    output::write_file(&args.out, &output::theory_csv(&points))?;
    println!("wrote {} rows to {}", points.len(), args.out.display());
    Ok(())
}

fn finish_grid(
    command: &str,
    cfg: &ExperimentConfig,
    run: &RunArgs,
    out: &std::path::Path,
    manifest_path: &std::path::Path,
) -> Result<()> {
    cfg.validate()?;
    let start = Instant::now();
    let rows = run_grid(cfg)?;
    let mut manifest = Manifest::new(command, cfg, vec![path_string(out)]);
    if run.timing {
        manifest.wall_seconds = Some(start.elapsed().as_secs_f64());
    }
    output::emit_results(&rows, out, manifest_path, &manifest, run.timing)?;
    print_rows(&rows);
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let alpha = AlphaSpec::List {
        values: args.alpha.0.clone(),
    };
    let cfg = args.run.config(args.variant, args.gamma.0.clone(), alpha);
    finish_grid("simulate", &cfg, &args.run, &args.out, &args.manifest)
}

fn cmd_scan(args: &ScanArgs) -> Result<()> {
    if !(args.from > 0.0 && args.from <= args.to && args.to.is_finite()) {
        return Err(SimError::Config(format!(
            "need 0 < from <= to, got from = {} and to = {}",
            args.from, args.to
        )));
    }
    if args.points == 0 {
        return Err(SimError::Config("points must be at least 1".into()));
    }
    let alpha = AlphaSpec::Relative {
        factors: geometric_factors(args.from, args.to, args.points),
    };
    let cfg = args
        .run
        .config(VariantKind::Thresholded, args.gamma.0.clone(), alpha);
    finish_grid("scan", &cfg, &args.run, &args.out, &args.manifest)
}

fn cmd_critical(args: &CriticalArgs) -> Result<()> {
    let alpha = AlphaSpec::Bisection(BisectionSpec {
        lo: args.lo,
        hi: args.hi,
        target_fraction: args.target,
        max_iters: args.max_iters,
    });
    let cfg = args.run.config(args.variant, args.gamma.0.clone(), alpha);
    cfg.validate()?;
    let start = Instant::now();
    let outcomes = estimate_critical_alpha(&cfg)?;

    let rows_path = path_string(&args.out);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let mut first_failure = None;
    for o in outcomes {
        match &o.result {
            Ok(a) => println!(
                "N={} gamma={} alpha_hat={}",
                o.n,
                output::format_g9(o.gamma),
                output::format_g9(*a)
            ),
            Err(e) => eprintln!("N={} gamma={}: {e}", o.n, output::format_g9(o.gamma)),
        }
        summary.push(CriticalSummary {
            gamma: o.gamma,
            n: o.n,
            alpha_hat: o.result.as_ref().ok().copied(),
            rows: rows_path.clone(),
        });
        rows.extend(o.rows);
        if let (Err(e), None) = (o.result, &first_failure) {
            first_failure = Some(e);
        }
    }

    let outputs = vec![rows_path, path_string(&args.summary)];
    let mut manifest = Manifest::new("critical", &cfg, outputs);
    if args.run.timing {
        manifest.wall_seconds = Some(start.elapsed().as_secs_f64());
    }
    output::emit_results(&rows, &args.out, &args.manifest, &manifest, args.run.timing)?;
    output::write_file(&args.summary, &output::critical_json(&summary))?;
    match first_failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Theory(a) => cmd_theory(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Critical(a) => cmd_critical(a),
    }
}

/// Parses `args` and runs the command. Exit status: 0 on success, 1 on a
/// usage error, 2 on a runtime or data error.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
