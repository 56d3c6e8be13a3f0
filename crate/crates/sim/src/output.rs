//! Result files: results CSV, run manifest, theory CSV and the critical-load
//! summary.

use std::fs;
use std::io::Write;
use std::path::Path;

use beg_core::TheoryPoint;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{Result, SimError};
use crate::experiment::ResultRow;

pub const RESULTS_HEADER: &str = "N,gamma,alpha,M,trials,tested_patterns,unstable_fraction,\
zero_on_fraction,erase_fraction,flip_fraction,ci_lo,ci_hi,wall_seconds,seed";

pub const THEORY_HEADER: &str = "gamma,x_hat,x_star,alpha_star";

pub const TOOL_NAME: &str = "beg";

/// `printf("%.9g")`.
pub fn format_g9(x: f64) -> String {
    const PRECISION: i32 = 9;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Results CSV as a string. `wall_seconds` is written as `0` unless
/// `include_timing` is set, which keeps repeated runs byte-identical.
pub fn results_csv(rows: &[ResultRow], include_timing: bool) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(RESULTS_HEADER);
    out.push('\n');
    for r in rows {
        let wall = if include_timing { r.wall_seconds } else { 0.0 };
        let line = [
            r.n.to_string(),
            format_g9(r.gamma),
            format_g9(r.alpha),
            r.m.to_string(),
            r.trials.to_string(),
            r.tested_patterns.to_string(),
            format_g9(r.unstable_fraction),
            format_g9(r.zero_on_fraction),
            format_g9(r.erase_fraction),
            format_g9(r.flip_fraction),
            format_g9(r.ci_lo),
            format_g9(r.ci_hi),
            format_g9(wall),
            r.seed.to_string(),
        ]
        .join(",");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn theory_csv(points: &[TheoryPoint]) -> String {
    let mut out = String::from(THEORY_HEADER);
    out.push('\n');
    for p in points {
        let fields = [p.gamma, p.x_hat, p.x_star, p.alpha_star].map(format_g9);
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Everything needed to rerun an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub master_seed: u64,
    pub config: ExperimentConfig,
    /// Files written by the run, as given on the command line.
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_seconds: Option<f64>,
}

impl Manifest {
    pub fn new(command: &str, config: &ExperimentConfig, outputs: Vec<String>) -> Self {
        Manifest {
            tool: TOOL_NAME.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            master_seed: config.master_seed,
            config: config.clone(),
            outputs,
            wall_seconds: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| SimError::Json {
            path: path.into(),
            source,
        })
    }
}

/// One entry of the critical-load summary. `alpha_hat` is `null` when the
/// bracket did not straddle the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalSummary {
    pub gamma: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha_hat: Option<f64>,
    /// Path of the CSV holding the audit rows.
    pub rows: String,
}

pub fn critical_json(entries: &[CriticalSummary]) -> String {
    let mut s = serde_json::to_string_pretty(entries).expect("summary serializes");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| SimError::io(path, e))?;
    f.write_all(contents.as_bytes())
        .and_then(|_| f.flush())
        .map_err(|e| SimError::io(path, e))
}

/// Writes the results CSV and the manifest.
pub fn emit_results(
    rows: &[ResultRow],
    csv_path: &Path,
    manifest_path: &Path,
    manifest: &Manifest,
    include_timing: bool,
) -> Result<()> {
    write_file(csv_path, &results_csv(rows, include_timing))?;
    write_file(manifest_path, &manifest.to_json())
}
