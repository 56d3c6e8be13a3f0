use std::time::Instant;

use beg_core::dynamics::check_stability;
use beg_core::stats::{wilson_interval, Z_95};
use beg_core::{seed, ModelParams, PatternSet};
use rayon::prelude::*;

use crate::config::{AlphaSpec, BisectionSpec, ExperimentConfig, VariantKind};
use crate::error::{Result, SimError};

/// One `(variant, N, γ, α)` point of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSpec {
    pub variant: VariantKind,
    pub n: usize,
    pub gamma: f64,
    pub alpha: f64,
}

/// Per-cell knobs shared by every cell of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub trials: usize,
    pub patterns_per_set: usize,
    pub cell_budget: u64,
}

impl From<&ExperimentConfig> for RunOptions {
    fn from(cfg: &ExperimentConfig) -> Self {
        RunOptions {
            trials: cfg.trials,
            patterns_per_set: cfg.patterns_per_set,
            cell_budget: cfg.cell_budget,
        }
    }
}

/// Raw tallies over all tested patterns of a cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CellCounts {
    pub tested: u64,
    pub unstable: u64,
    /// Patterns with at least one inactive neuron switched on.
    pub zero_on: u64,
    /// Patterns with at least one active neuron erased.
    pub erased: u64,
    /// Patterns with at least one active neuron flipped.
    pub flipped: u64,
    /// Patterns with `k ≥ 1`.
    pub nonempty: u64,
    /// Patterns with `k ≥ 1` and at least one erasure.
    pub erased_nonempty: u64,
    /// Unstable patterns with at least one inactive neuron switched on.
    pub unstable_zero_on: u64,
}

impl CellCounts {
    fn add(mut self, o: CellCounts) -> Self {
        self.tested += o.tested;
        self.unstable += o.unstable;
        self.zero_on += o.zero_on;
        self.erased += o.erased;
        self.flipped += o.flipped;
        self.nonempty += o.nonempty;
        self.erased_nonempty += o.erased_nonempty;
        self.unstable_zero_on += o.unstable_zero_on;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub gamma: f64,
    pub alpha: f64,
    pub m: usize,
    pub trials: usize,
    pub tested_patterns: u64,
    pub unstable_fraction: f64,
    pub zero_on_fraction: f64,
    pub erase_fraction: f64,
    pub flip_fraction: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub wall_seconds: f64,
    pub seed: u64,
    pub counts: CellCounts,
}

impl ResultRow {
    fn from_counts(cell: &CellSpec, m: usize, trials: usize, seed: u64, c: CellCounts) -> Self {
        let frac = |x: u64| {
            if c.tested == 0 {
                0.0
            } else {
                x as f64 / c.tested as f64
            }
        };
        let (ci_lo, ci_hi) = wilson_interval(c.unstable, c.tested, Z_95);
        ResultRow {
            n: cell.n,
            gamma: cell.gamma,
            alpha: cell.alpha,
            m,
            trials,
            tested_patterns: c.tested,
            unstable_fraction: frac(c.unstable),
            zero_on_fraction: frac(c.zero_on),
            erase_fraction: frac(c.erased),
            flip_fraction: frac(c.flipped),
            ci_lo,
            ci_hi,
            wall_seconds: 0.0,
            seed,
            counts: c,
        }
    }
}

fn run_trial(
    cell: &CellSpec,
    params: &ModelParams,
    opts: &RunOptions,
    trial_seed: u64,
) -> Result<CellCounts> {
    let ps = PatternSet::generate_with_budget(params, trial_seed, opts.cell_budget as u128)?;
    let mut c = CellCounts::default();
    for mu in 0..opts.patterns_per_set.min(ps.m()) {
        let r = check_stability(&ps, mu, cell.variant.into(), cell.gamma)?;
        let any = |x: usize| u64::from(x > 0);
        c.tested += 1;
        c.unstable += u64::from(!r.stable);
        c.zero_on += any(r.zero_to_nonzero);
        c.erased += any(r.erased);
        c.flipped += any(r.sign_flipped);
        c.nonempty += any(r.k);
        c.erased_nonempty += u64::from(r.k > 0 && r.erased > 0);
        c.unstable_zero_on += u64::from(!r.stable && r.zero_to_nonzero > 0);
    }
    Ok(c)
}

/// Monte Carlo estimate for one cell. Trial `t` draws a fresh pattern set
/// from `seed::derive(cell_seed, t)`; trials run on the current rayon pool
/// and are reduced in trial order, so the row does not depend on the number
/// of workers.
pub fn run_cell(cell: &CellSpec, opts: &RunOptions, cell_seed: u64) -> Result<ResultRow> {
    if opts.trials == 0 {
        return Err(SimError::Config("trials must be at least 1".into()));
    }
    if opts.patterns_per_set == 0 {
        return Err(SimError::Config(
            "patterns per set must be at least 1".into(),
        ));
    }
    let params = ModelParams::new(cell.n, cell.gamma, cell.alpha)?;
    let start = Instant::now();
    let per_trial: Vec<CellCounts> = (0..opts.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(cell, &params, opts, seed::derive(cell_seed, t)))
        .collect::<Result<_>>()?;
    let total = per_trial
        .into_iter()
        .fold(CellCounts::default(), CellCounts::add);
    let mut row = ResultRow::from_counts(cell, params.m(), opts.trials, cell_seed, total);
    row.wall_seconds = start.elapsed().as_secs_f64();
    Ok(row)
}

pub(crate) fn with_pool<T: Send>(
    threads: usize,
    f: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SimError::ThreadPool(e.to_string()))?;
    pool.install(f)
}

/// Cells of a list or relative grid in lexicographic `(N, γ, α)` order,
/// each paired with its derived seed.
pub fn grid_cells(cfg: &ExperimentConfig) -> Result<Vec<(CellSpec, u64)>> {
    cfg.validate()?;
    if matches!(cfg.alpha, AlphaSpec::Bisection(_)) {
        return Err(SimError::Config(
            "bisection specs are run by estimate_critical_alpha".into(),
        ));
    }
    let mut cells = Vec::new();
    for &n in &cfg.n_axis() {
        for &gamma in &cfg.gamma_axis() {
            for alpha in cfg.alpha_axis(gamma)? {
                let index = cells.len() as u64;
                let cell = CellSpec {
                    variant: cfg.variant,
                    n,
                    gamma,
                    alpha,
                };
                cells.push((cell, seed::derive(cfg.master_seed, index)));
            }
        }
    }
    Ok(cells)
}

/// Runs every cell of the grid on a pool of `cfg.threads` workers.
pub fn run_grid(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let cells = grid_cells(cfg)?;
    let opts = RunOptions::from(cfg);
    with_pool(cfg.threads, || {
        cells
            .iter()
            .map(|(cell, s)| run_cell(cell, &opts, *s))
            .collect()
    })
}

/// Bisection result for one `(N, γ)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalEstimate {
    pub n: usize,
    pub gamma: f64,
    pub alpha_hat: f64,
    /// Every evaluated cell in evaluation order: both bracket ends, then the
    /// midpoints.
    pub rows: Vec<ResultRow>,
}

/// Bisection on `α` for the load at which the unstable fraction crosses
/// `spec.target_fraction`. All loads share `cell_seed`, so neighbouring
/// evaluations see the same pattern draws. The search stops early at the
/// first midpoint whose Wilson interval contains the target.
///
/// On a bracket that fails to straddle the target, returns
/// [`SimError::NoStraddle`] together with the two bracket rows.
pub fn bisect_cell(
    variant: VariantKind,
    n: usize,
    gamma: f64,
    spec: &BisectionSpec,
    opts: &RunOptions,
    cell_seed: u64,
) -> std::result::Result<CriticalEstimate, (SimError, Vec<ResultRow>)> {
    let cell = |alpha| CellSpec {
        variant,
        n,
        gamma,
        alpha,
    };
    let no_rows = |e: SimError| (e, Vec::new());
    if !(spec.lo > 0.0 && spec.lo < spec.hi && spec.hi.is_finite()) {
        return Err(no_rows(SimError::Config(format!(
            "bracket lo = {} must be positive and below hi = {}",
            spec.lo, spec.hi
        ))));
    }
    let target = spec.target_fraction;
    let lo_row = run_cell(&cell(spec.lo), opts, cell_seed).map_err(no_rows)?;
    let hi_row = run_cell(&cell(spec.hi), opts, cell_seed).map_err(no_rows)?;
    if !(lo_row.unstable_fraction < target && hi_row.unstable_fraction >= target) {
        let err = SimError::NoStraddle {
            lo: spec.lo,
            hi: spec.hi,
            f_lo: lo_row.unstable_fraction,
            f_hi: hi_row.unstable_fraction,
            target,
        };
        return Err((err, vec![lo_row, hi_row]));
    }
    let (mut lo, mut hi) = (spec.lo, spec.hi);
    let mut rows = vec![lo_row, hi_row];
    for _ in 0..spec.max_iters {
        let mid = 0.5 * (lo + hi);
        let row = match run_cell(&cell(mid), opts, cell_seed) {
            Ok(r) => r,
            Err(e) => return Err((e, rows)),
        };
        let undecided = row.ci_lo <= target && target <= row.ci_hi;
        let above = row.unstable_fraction >= target;
        rows.push(row);
        if undecided {
            return Ok(CriticalEstimate {
                n,
                gamma,
                alpha_hat: mid,
                rows,
            });
        }
        if above {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalEstimate {
        n,
        gamma,
        alpha_hat: 0.5 * (lo + hi),
        rows,
    })
}

/// Outcome of one `(N, γ)` pair of a critical-load run.
#[derive(Debug)]
pub struct CriticalOutcome {
    pub n: usize,
    pub gamma: f64,
    pub result: std::result::Result<f64, SimError>,
    pub rows: Vec<ResultRow>,
}

/// Runs [`bisect_cell`] for every `(N, γ)` pair in lexicographic order; pair
/// `i` uses seed `seed::derive(master_seed, i)`. A bracket that does not
/// straddle the target is recorded in that pair's outcome; any other failure
/// aborts the run.
pub fn estimate_critical_alpha(cfg: &ExperimentConfig) -> Result<Vec<CriticalOutcome>> {
    cfg.validate()?;
    let AlphaSpec::Bisection(spec) = &cfg.alpha else {
        return Err(SimError::Config(
            "critical runs need a bisection spec".into(),
        ));
    };
    let opts = RunOptions::from(cfg);
    with_pool(cfg.threads, || {
        let mut out = Vec::new();
        for &n in &cfg.n_axis() {
            for &gamma in &cfg.gamma_axis() {
                let s = seed::derive(cfg.master_seed, out.len() as u64);
                match bisect_cell(cfg.variant, n, gamma, spec, &opts, s) {
                    Ok(est) => out.push(CriticalOutcome {
                        n,
                        gamma,
                        result: Ok(est.alpha_hat),
                        rows: est.rows,
                    }),
                    Err((e @ SimError::NoStraddle { .. }, rows)) => out.push(CriticalOutcome {
                        n,
                        gamma,
                        result: Err(e),
                        rows,
                    }),
                    Err((e, _)) => return Err(e),
                }
            }
        }
        Ok(out)
    })
}
