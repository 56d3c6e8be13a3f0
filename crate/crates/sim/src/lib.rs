//! Monte Carlo stability experiments for the ternary BEG-type memory,
//! plus the file formats and command-line driver built on top of them.
//!
//! A run is described by an [`ExperimentConfig`]. [`run_grid`] evaluates a
//! grid of `(N, γ, α)` cells; [`estimate_critical_alpha`] bisects on `α` for
//! the load where half of the stored patterns stop being fixed points.
//! Results are deterministic in the master seed, whatever the thread count.

pub mod cli;
pub mod config;
mod error;
pub mod experiment;
pub mod grid;
pub mod output;
pub mod snapshot;

pub use config::{AlphaSpec, BisectionSpec, ExperimentConfig, VariantKind};
pub use error::{Result, SimError};
pub use experiment::{
    bisect_cell, estimate_critical_alpha, grid_cells, run_cell, run_grid, CellCounts, CellSpec,
    CriticalEstimate, CriticalOutcome, ResultRow, RunOptions,
};
