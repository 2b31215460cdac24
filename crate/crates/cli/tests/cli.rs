use std::fs;
use std::path::Path;
use std::process::Command;

use nlfm_cli::artifacts::{self, read_waveform_csv};
use nlfm_cli::compare::compare;
use nlfm_cli::config::{DesignConfig, MethodKind, WindowKind};
use nlfm_cli::sweep::{sweep, SweepGrid};
use nlfm_cli::{run_compare, run_design, run_sweep, CliError};
use nlfm_core::acf::autocorrelation_oversampled;
use nlfm_core::synth::Waveform;

fn nlfm(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_nlfm"))
        .args(args)
        .output()
        .unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const DATA_FILES: [&str; 6] = [
    artifacts::WAVEFORM_CSV,
    artifacts::WAVEFORM_IQ,
    artifacts::WAVEFORM_META,
    artifacts::ACF_CSV,
    artifacts::REPORT_JSON,
    artifacts::ACF_SVG,
];

#[test]
fn design_writes_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d");
    let cfg = dir.path().join("g.cfg");
    fs::write(
        &cfg,
        "window = gaussian\nT = 2.5us\nmethod = spline\nlambda = 1e-22\n",
    )
    .unwrap();
    let o = nlfm(&[
        "design",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in DATA_FILES.iter().chain([&artifacts::MANIFEST_JSON]) {
        assert!(out.join(f).is_file(), "{f}");
    }
    let report = json(&out.join(artifacts::REPORT_JSON));
    assert!(report["metrics"]["psl_db"].as_f64().unwrap() < 0.0);
    assert_eq!(report["pulse_length_s"].as_f64().unwrap(), 2.5e-6);
    assert_eq!(report["monotone"], true);
    let iq = fs::read(out.join(artifacts::WAVEFORM_IQ)).unwrap();
    assert_eq!(iq.len(), 1250 * 16);
    let svg = fs::read_to_string(out.join(artifacts::ACF_SVG)).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline") && svg.contains("PSL"));
    let manifest = json(&out.join(artifacts::MANIFEST_JSON));
    assert_eq!(manifest["command"], "design");
    assert!(manifest["wall_time_seconds"].is_number());
}

#[test]
fn aliasing_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let o = nlfm(&[
        "design",
        "--fs",
        "50MHz",
        "--B",
        "100MHz",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(err["error"], "aliasing");
    assert!(!out.exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = nlfm(&[
        "design",
        "--config",
        dir.path().join("missing.cfg").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4));
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(
        nlfm(&["design", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(nlfm(&["design", "--lambda", "-1"]).status.code(), Some(2));
    assert_eq!(nlfm(&["sweep", "--vary", "lambda"]).status.code(), Some(2));
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let inside = blocker.join("out");
    assert_eq!(
        nlfm(&["design", "--out", inside.to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(nlfm(&["compare"]).status.code(), Some(2));
}

#[test]
fn degree_zero_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let config = DesignConfig {
        method: MethodKind::Polynomial,
        degree: 0,
        out: dir.path().to_path_buf(),
        ..Default::default()
    };
    let o = run_design(&config).unwrap();
    assert!(!o.monotone);
    assert!(!o.diagnostics.is_empty());
    let report = json(&dir.path().join(artifacts::REPORT_JSON));
    assert_eq!(report["monotone"], false);
}

#[test]
fn single_point_sweep_matches_design() {
    let dir = tempfile::tempdir().unwrap();
    let base = DesignConfig {
        window: WindowKind::Taylor,
        pulse_length: 10e-6,
        out: dir.path().join("s"),
        ..Default::default()
    };
    let mut grid = SweepGrid::default();
    grid.set("lambda", "3e-22").unwrap();
    grid.set("nbar", "6").unwrap();
    let outcome = run_sweep(&base, &grid, 2).unwrap();
    assert_eq!(outcome.rows.len(), 1);
    let point = outcome.rows[0].point.apply(&base);
    let direct = run_design(&DesignConfig {
        out: dir.path().join("d"),
        ..point
    })
    .unwrap();
    assert_eq!(outcome.rows[0].result.as_ref().unwrap(), &direct.metrics());
    let best = json(&base.out.join("best.json"));
    assert_eq!(
        best["psl"]["metrics"]["psl_db"].as_f64(),
        direct.report.psl_db
    );
}

#[test]
fn invalid_point_is_recorded() {
    let base = DesignConfig::default();
    let mut grid = SweepGrid::default();
    grid.set("lambda", "1e-22, -1, 1e-21").unwrap();
    let outcome = sweep(&base, &grid, 0).unwrap();
    assert_eq!(outcome.rows.len(), 3);
    assert!(outcome.rows[0].result.is_ok());
    assert!(outcome.rows[1]
        .result
        .as_ref()
        .unwrap_err()
        .contains("smoothing"));
    assert!(outcome.rows[2].result.is_ok());
    let lines = outcome.csv_lines();
    assert!(lines[2].contains(",failed,"));
    assert_ne!(outcome.best(grid.objective).unwrap().index, 1);
}

#[test]
fn grid_order_is_cartesian() {
    let mut grid = SweepGrid::default();
    grid.set("k", "40, 100").unwrap();
    grid.set("lambda", "logspace(-24, -22, 3)").unwrap();
    let pts = grid.points(&DesignConfig::default());
    assert_eq!(pts.len(), 6);
    assert_eq!((pts[0].k, pts[0].lambda), (40.0, 1e-24));
    assert_eq!((pts[2].k, pts[2].lambda), (40.0, 1e-22));
    assert_eq!(pts[3].k, 100.0);
}

#[test]
fn compare_table_layout() {
    let base = DesignConfig {
        pulse_length: 10e-6,
        ..Default::default()
    };
    let configs: Vec<DesignConfig> = [WindowKind::Gaussian, WindowKind::Taylor]
        .into_iter()
        .flat_map(|window| {
            let base = base.clone();
            [MethodKind::Polynomial, MethodKind::Spline]
                .into_iter()
                .map(move |method| DesignConfig {
                    window,
                    method,
                    ..base.clone()
                })
        })
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let table = run_compare(&configs, dir.path()).unwrap();
    assert_eq!(table.rows.len(), 5);
    assert_eq!(table.rows[4].method, MethodKind::Lfm);
    assert_eq!(table.rows[4].nmlw, 1.0);
    assert!(table.rows[..4].iter().all(|r| r.nmlw > 1.0));
    let pivot = table.pivot();
    assert!(pivot.contains("PSL (dB)") && pivot.contains("NMLW"));
    let csv = fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);

    assert!(matches!(compare(&[]), Err(CliError::Usage(_))));
    let mixed = [
        base.clone(),
        DesignConfig {
            sample_rate: 400e6,
            ..base
        },
    ];
    assert!(matches!(
        compare(&mixed),
        Err(CliError::InvalidComparison(_))
    ));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<_> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("run{i}"));
            let o = nlfm(&[
                "design",
                "--window",
                "taylor",
                "--method",
                "polynomial",
                "--degree",
                "11",
                "--out",
                out.to_str().unwrap(),
            ]);
            assert!(o.status.success());
            out
        })
        .collect();
    for f in DATA_FILES {
        assert_eq!(
            fs::read(runs[0].join(f)).unwrap(),
            fs::read(runs[1].join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn sweep_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut grid = SweepGrid::default();
    grid.set("k", "40, 73.68").unwrap();
    grid.set("lambda", "logspace(-23, -21, 5)").unwrap();
    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .max(4);
    let outs: Vec<_> = [1usize, threads]
        .into_iter()
        .map(|jobs| {
            let base = DesignConfig {
                out: dir.path().join(format!("j{jobs}")),
                ..Default::default()
            };
            run_sweep(&base, &grid, jobs).unwrap();
            base.out
        })
        .collect();
    for f in ["sweep.csv", "best.json"] {
        assert_eq!(
            fs::read(outs[0].join(f)).unwrap(),
            fs::read(outs[1].join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn waveform_csv_round_trips_to_acf_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = DesignConfig {
        out: dir.path().to_path_buf(),
        ..Default::default()
    };
    run_design(&config).unwrap();
    let samples = read_waveform_csv(&dir.path().join(artifacts::WAVEFORM_CSV)).unwrap();
    let meta = json(&dir.path().join(artifacts::WAVEFORM_META));
    let report = json(&dir.path().join(artifacts::REPORT_JSON));
    let w = Waveform::new(
        samples,
        meta["sample_rate_hz"].as_f64().unwrap(),
        meta["pulse_length_s"].as_f64().unwrap(),
        "reloaded",
    );
    let curve =
        autocorrelation_oversampled(&w, report["oversample"].as_u64().unwrap() as usize).unwrap();
    let text = fs::read_to_string(dir.path().join(artifacts::ACF_CSV)).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), curve.len());
    for (i, r) in rows.iter().enumerate() {
        assert!((r[0] - curve.lags()[i]).abs() <= 1e-9 * curve.lags()[0].abs());
        assert!((r[1] - curve.magnitude()[i]).abs() <= 1e-9);
        assert!((r[2] - curve.db()[i]).abs() <= 1e-9 * r[2].abs().max(1.0));
    }
}
