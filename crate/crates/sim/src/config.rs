use beg_core::pattern::DEFAULT_CELL_BUDGET;
use beg_core::{theory, Variant};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

pub const DEFAULT_TRIALS: usize = 200;
pub const DEFAULT_TARGET_FRACTION: f64 = 0.5;
pub const DEFAULT_MAX_ITERS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum VariantKind {
    /// No threshold (τ = 0).
    Original,
    /// Threshold τ = γ ln N.
    Thresholded,
}

impl From<VariantKind> for Variant {
    fn from(v: VariantKind) -> Self {
        match v {
            VariantKind::Original => Variant::Original,
            VariantKind::Thresholded => Variant::Thresholded,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectionSpec {
    pub lo: f64,
    pub hi: f64,
    pub target_fraction: f64,
    pub max_iters: usize,
}

/// How the load axis of a grid is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaSpec {
    /// The same loads for every `γ`.
    List {
        values: Vec<f64>,
    },
    /// Loads `factor · α*(γ)`, so each `γ` gets its own axis.
    Relative {
        factors: Vec<f64>,
    },
    Bisection(BisectionSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub variant: VariantKind,
    pub n_list: Vec<usize>,
    pub gamma_list: Vec<f64>,
    pub alpha: AlphaSpec,
    /// Fresh pattern sets per cell.
    pub trials: usize,
    /// Stored patterns tested per set, `μ = 0, 1, …`.
    pub patterns_per_set: usize,
    pub master_seed: u64,
    /// Worker threads; 0 lets the pool pick.
    pub threads: usize,
    /// Largest `M · N` a single pattern set may occupy.
    pub cell_budget: u64,
}

impl ExperimentConfig {
    pub fn new(
        variant: VariantKind,
        n_list: Vec<usize>,
        gamma_list: Vec<f64>,
        alpha: AlphaSpec,
    ) -> Self {
        ExperimentConfig {
            variant,
            n_list,
            gamma_list,
            alpha,
            trials: DEFAULT_TRIALS,
            patterns_per_set: 1,
            master_seed: 0,
            threads: 0,
            cell_budget: DEFAULT_CELL_BUDGET as u64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SimError::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.patterns_per_set == 0 {
            return bad("patterns per set must be at least 1".into());
        }
        if self.n_list.is_empty() {
            return bad("no N values given".into());
        }
        if let Some(n) = self.n_list.iter().find(|&&n| n < 3) {
            return bad(format!("N = {n} is below the minimum of 3"));
        }
        if self.n_list.iter().any(|&n| n > u32::MAX as usize) {
            return bad("N exceeds 32-bit neuron indices".into());
        }
        if self.variant == VariantKind::Thresholded {
            if self.gamma_list.is_empty() {
                return bad("no gamma values given".into());
            }
            if let Some(g) = self
                .gamma_list
                .iter()
                .find(|g| !(g.is_finite() && **g >= 0.0))
            {
                return bad(format!("gamma = {g} must be finite and non-negative"));
            }
        }
        let positive = |what: &str, xs: &[f64]| -> Result<()> {
            if xs.is_empty() {
                return bad(format!("no {what} given"));
            }
            match xs.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                Some(x) => bad(format!("{what} entry {x} must be finite and positive")),
                None => Ok(()),
            }
        };
        match &self.alpha {
            AlphaSpec::List { values } => positive("alpha values", values)?,
            AlphaSpec::Relative { factors } => {
                positive("alpha factors", factors)?;
                if self.variant == VariantKind::Original {
                    return bad("relative loads need the thresholded variant".into());
                }
                if let Some(g) = self.gamma_list.iter().find(|g| !(**g > 0.0 && **g <= 2.0)) {
                    return bad(format!("relative loads need 0 < gamma <= 2, got {g}"));
                }
            }
            AlphaSpec::Bisection(b) => {
                positive("bracket ends", &[b.lo, b.hi])?;
                if b.lo >= b.hi {
                    return bad(format!("bracket lo = {} must be below hi = {}", b.lo, b.hi));
                }
                if !(b.target_fraction > 0.0 && b.target_fraction < 1.0) {
                    return bad(format!(
                        "target fraction {} must lie in (0, 1)",
                        b.target_fraction
                    ));
                }
            }
        }
        Ok(())
    }

    /// Sorted, de-duplicated `N` axis.
    pub fn n_axis(&self) -> Vec<usize> {
        let mut v = self.n_list.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Sorted, de-duplicated `γ` axis. The original variant has no threshold
    /// and runs a single `γ = 0` column whatever `gamma_list` holds.
    pub fn gamma_axis(&self) -> Vec<f64> {
        match self.variant {
            VariantKind::Original => vec![0.0],
            VariantKind::Thresholded => sorted(&self.gamma_list),
        }
    }

    /// Sorted load axis for one `γ`; empty for bisection specs.
    pub fn alpha_axis(&self, gamma: f64) -> Result<Vec<f64>> {
        Ok(match &self.alpha {
            AlphaSpec::List { values } => sorted(values),
            AlphaSpec::Relative { factors } => {
                let star = theory::alpha_star(gamma)?;
                sorted(&factors.iter().map(|f| f * star).collect::<Vec<_>>())
            }
            AlphaSpec::Bisection(_) => Vec::new(),
        })
    }
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Log-spaced factors from `from` to `to` inclusive.
pub fn geometric_factors(from: f64, to: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![from],
        _ => {
            let ratio = (to / from).ln() / (points - 1) as f64;
            (0..points)
                .map(|i| from * (ratio * i as f64).exp())
                .collect()
        }
    }
}
