use std::fs;

use beg_core::theory::theory_point;
use beg_core::{ModelParams, PatternSet};
use beg_sim::output::{
    critical_json, emit_results, format_g9, results_csv, theory_csv, CriticalSummary, Manifest,
    RESULTS_HEADER,
};
use beg_sim::snapshot::{read_snapshot, write_snapshot};
use beg_sim::{run_grid, AlphaSpec, BisectionSpec, ExperimentConfig, VariantKind};

fn small_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(
        VariantKind::Thresholded,
        vec![300],
        vec![1.0],
        AlphaSpec::List {
            values: vec![0.1, 0.4],
        },
    );
    cfg.trials = 12;
    cfg.master_seed = 5;
    cfg
}

#[test]
fn header_is_exact() {
    assert_eq!(
        RESULTS_HEADER,
        "N,gamma,alpha,M,trials,tested_patterns,unstable_fraction,zero_on_fraction,\
         erase_fraction,flip_fraction,ci_lo,ci_hi,wall_seconds,seed"
    );
}

#[test]
fn csv_rows_are_byte_identical_across_runs() {
    let cfg = small_config();
    let a = results_csv(&run_grid(&cfg).unwrap(), false);
    let b = results_csv(&run_grid(&cfg).unwrap(), false);
    assert_eq!(a, b);
    assert!(!a.contains('\r'));
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines.len(), 3);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 14);
        assert_eq!(fields[0], "300");
        assert_eq!(fields[4], "12");
        assert_eq!(fields[12], "0");
    }
}

#[test]
fn timing_column_is_opt_in() {
    let mut rows = run_grid(&small_config()).unwrap();
    rows[0].wall_seconds = 1.25;
    let with = results_csv(&rows, true);
    let second = with.lines().nth(1).unwrap();
    assert_eq!(second.split(',').nth(12), Some("1.25"));
}

#[test]
fn emitted_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config();
    let rows = run_grid(&cfg).unwrap();
    let csv = dir.path().join("r.csv");
    let man = dir.path().join("r.json");
    let manifest = Manifest::new("simulate", &cfg, vec!["r.csv".into()]);
    emit_results(&rows, &csv, &man, &manifest, false).unwrap();
    assert_eq!(fs::read_to_string(&csv).unwrap(), results_csv(&rows, false));
    let back = Manifest::read(&man).unwrap();
    assert_eq!(back, manifest);
    assert_eq!(back.config, cfg);
    assert_eq!(back.master_seed, 5);
    assert_eq!(back.version, env!("CARGO_PKG_VERSION"));
    assert!(back.wall_seconds.is_none());
}

#[test]
fn manifest_round_trips_every_alpha_spec() {
    let mut cfg = small_config();
    cfg.master_seed = u64::MAX;
    for alpha in [
        AlphaSpec::List {
            values: vec![0.1, 1.0 / 3.0],
        },
        AlphaSpec::Relative {
            factors: vec![0.1, 10.0],
        },
        AlphaSpec::Bisection(BisectionSpec {
            lo: 0.05,
            hi: 2.0,
            target_fraction: 0.5,
            max_iters: 12,
        }),
    ] {
        cfg.alpha = alpha;
        let m = Manifest::new("x", &cfg, vec![]);
        let back: Manifest = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(back.config, cfg);
    }
}

#[test]
fn write_failure_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("r.csv");
    let m = Manifest::new("simulate", &small_config(), vec![]);
    let err = emit_results(&[], &bad, &dir.path().join("m.json"), &m, false).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn theory_table() {
    let points: Vec<_> = (1..=20)
        .map(|i| theory_point(i as f64 / 10.0).unwrap())
        .collect();
    let csv = theory_csv(&points);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "gamma,x_hat,x_star,alpha_star");
    assert_eq!(lines.len(), 21);
    assert_eq!(
        lines[20],
        format!("2,{},4.92155363,0.51000195", format_g9(1f64.exp()))
    );
}

#[test]
fn critical_summary_schema() {
    let entries = vec![
        CriticalSummary {
            gamma: 2.0,
            n: 1000,
            alpha_hat: Some(0.75),
            rows: "rows.csv".into(),
        },
        CriticalSummary {
            gamma: 2.0,
            n: 2000,
            alpha_hat: None,
            rows: "rows.csv".into(),
        },
    ];
    let v: serde_json::Value = serde_json::from_str(&critical_json(&entries)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    for obj in arr {
        let mut keys: Vec<&String> = obj.as_object().unwrap().keys().collect();
        keys.sort();
        assert_eq!(keys, ["N", "alpha_hat", "gamma", "rows"]);
    }
    assert_eq!(arr[0]["alpha_hat"], 0.75);
    assert!(arr[1]["alpha_hat"].is_null());
}

#[test]
fn snapshot_round_trip() {
    let params = ModelParams::new(700, 1.0, 0.4).unwrap();
    let ps = PatternSet::generate(&params, 314).unwrap();
    let mut bytes = Vec::new();
    write_snapshot(&ps, &mut bytes).unwrap();
    assert_eq!(&bytes[..8], b"BEGPSET\0");
    let back = read_snapshot(bytes.as_slice()).unwrap();
    assert_eq!(back, ps);
    assert_eq!(back.master_seed(), 314);
}

#[test]
fn snapshot_rejects_damage() {
    let params = ModelParams::new(100, 1.0, 0.2).unwrap();
    let ps = PatternSet::generate(&params, 1).unwrap();
    let mut bytes = Vec::new();
    write_snapshot(&ps, &mut bytes).unwrap();

    let mut bad_magic = bytes.clone();
    bad_magic[0] = b'X';
    assert!(read_snapshot(bad_magic.as_slice()).is_err());

    let mut bad_version = bytes.clone();
    bad_version[8] = 9;
    assert!(read_snapshot(bad_version.as_slice()).is_err());

    assert!(read_snapshot(&bytes[..bytes.len() - 1]).is_err());

    // Last entry's spin byte.
    let mut bad_spin = bytes.clone();
    let last = bad_spin.len() - 1;
    bad_spin[last] = 0;
    assert!(read_snapshot(bad_spin.as_slice()).is_err());
}
