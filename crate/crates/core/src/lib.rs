//! Ternary associative memory with BEG-type couplings: a spin coupling `J`
//! and an activity coupling `K`, both Hebbian.
//!
//! Patterns live in `{-1, 0, +1}^N` with activity `p = ln N / N`, and the
//! memory stores `M = ⌊α N² / ln² N⌋` of them. This crate holds the pure,
//! allocation-only parts of the model:
//!
//! * [`params`]: the `(N, γ, α)` control knobs and the derived `p`, `M`.
//! * [`pattern`]: seeded generation of pattern sets with an inverted index.
//! * [`dynamics`]: local fields, the two transfer rules and one-step
//!   fixed-point classification, plus a dense reference implementation.
//! * [`theory`]: the closed-form capacity curve `α*(γ) = γ / (x*_γ − 1)` and
//!   the large-deviation exponents it is built from.
//! * [`stats`]: Wilson intervals and rank correlation for Monte Carlo output.
//!
//! IO, threading and the command-line driver live in the `beg-sim` crate.
#![no_std]

extern crate alloc;

pub mod dynamics;
mod error;
pub mod params;
pub mod pattern;
pub mod seed;
pub mod stats;
pub mod theory;

pub use dynamics::{FieldPair, StabilityReport, Variant};
pub use error::{Error, Result};
pub use params::ModelParams;
pub use pattern::{Entry, PatternSet, TernaryConfig};
pub use theory::{Admissibility, TheoryPoint};
