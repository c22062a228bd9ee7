use std::process::{Command, Output};

use bosesemi_core::meanfield::{self, PhasePoint};
use bosesemi_core::{reference, ModelParams};

fn bosesemi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bosesemi"))
        .args(args)
        .env_remove("BOSESEMI_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = bosesemi(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Parsed CSV: header and rows of raw fields.
fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn spectrum_reproduces_the_reference_table() {
    let (h, rows) = csv(&ok(&[
        "spectrum", "--particles", "20", "--v", "1", "--g-over-ns", "-3", "--epsilon", "0.5", "--method", "both",
    ]));
    assert_eq!(h, ["n", "E_exact", "E_semiclassical", "abs_diff", "rel_diff"]);
    assert_eq!(rows.len(), 21);
    let mut printed: Vec<f64> = rows.iter().map(|r| -num(&r[col(&h, "E_exact")])).collect();
    printed.sort_by(f64::total_cmp);
    for (a, b) in printed.iter().zip(&reference::SECOND_COLUMN[1]) {
        assert!((a - b).abs() <= 0.001, "{a} vs {b}");
    }
    let span = num(&rows[20][1]) - num(&rows[0][1]);
    for r in &rows {
        let d = (num(&r[1]) - num(&r[2])).abs();
        assert!((num(&r[3]) - d).abs() < 2e-6);
        assert!((num(&r[4]) - d / span).abs() < 2e-6);
    }
}

#[test]
fn free_spectrum_columns_agree() {
    let (_, rows) = csv(&ok(&["spectrum", "--particles", "10", "--g", "0", "--epsilon", "0.7"]));
    let w = (1.49f64).sqrt();
    for (k, r) in rows.iter().enumerate() {
        let e = w * (2.0 * k as f64 - 10.0);
        assert!((num(&r[1]) - e).abs() < 1e-6 && (num(&r[2]) - e).abs() < 1e-6);
    }
    let (_, rows) = csv(&ok(&["spectrum", "--particles", "2", "--g-over-ns", "-0.9"]));
    assert_eq!(rows.len(), 3);
}

#[test]
fn method_selects_columns() {
    let (_, rows) = csv(&ok(&["spectrum", "--particles", "4", "--g-over-ns", "-1", "--method", "exact"]));
    assert!(rows.iter().all(|r| !r[1].is_empty() && r[2].is_empty() && r[3].is_empty()));
    let (_, rows) = csv(&ok(&["spectrum", "--particles", "4", "--g-over-ns", "-1", "--method", "semiclassical"]));
    assert!(rows.iter().all(|r| r[1].is_empty() && !r[2].is_empty()));
}

#[test]
fn sweep_rows_and_single_point() {
    let (h, rows) = csv(&ok(&["sweep", "--particles", "10", "--g-over-ns", "-0.5", "--sweep", "-2:2:81"]));
    let series = col(&h, "series");
    let levels: Vec<_> = rows.iter().filter(|r| r[series] == "level").collect();
    assert_eq!(levels.len(), 81 * 11);
    assert!(rows.iter().any(|r| r[series] == "Hstat" && r[col(&h, "label")] == "E+"));

    let single = ok(&["sweep", "--particles", "10", "--g-over-ns", "-3", "--sweep", "0.5:0.5:1"]);
    let spectrum = ok(&["spectrum", "--particles", "10", "--g-over-ns", "-3", "--epsilon", "0.5"]);
    let (_, srows) = csv(&spectrum);
    let (h, rows) = csv(&single);
    let lv: Vec<_> = rows.iter().filter(|r| r[col(&h, "series")] == "level").collect();
    assert_eq!(lv.len(), srows.len());
    for (a, b) in lv.iter().zip(&srows) {
        assert_eq!(a[col(&h, "E_exact")], b[1]);
        assert_eq!(a[col(&h, "E_semiclassical")], b[2]);
    }
}

#[test]
fn density_overlay_integrates_to_one() {
    let (h, rows) = csv(&ok(&["density", "--particles", "1500", "--g-over-ns", "-3", "--epsilon", "1"]));
    let bins: Vec<_> = rows.iter().filter(|r| r[0] == "bin").collect();
    assert_eq!(bins.len(), 60);
    let centres: Vec<f64> = bins.iter().map(|r| num(&r[1])).collect();
    let w = centres[1] - centres[0];
    // T diverges on the separatrix; only a bin centred there is dropped
    let total: f64 = bins
        .iter()
        .map(|r| num(&r[col(&h, "smooth")]))
        .filter(|s| s.is_finite())
        .sum::<f64>()
        * w;
    assert!((total - 1.0).abs() <= 0.02, "{total}");
    let hist: f64 = bins.iter().map(|r| num(&r[2]) * w).sum();
    assert!((hist - 1.0).abs() < 1e-4);
}

#[test]
fn free_density_is_flat() {
    let (_, rows) = csv(&ok(&["density", "--particles", "399", "--g", "0", "--bins", "8"]));
    let heights: Vec<f64> = rows.iter().filter(|r| r[0] == "bin").map(|r| num(&r[2])).collect();
    let smooth: Vec<f64> = rows.iter().filter(|r| r[0] == "bin").map(|r| num(&r[3])).collect();
    for (h, s) in heights.iter().zip(&smooth) {
        assert!((h / heights[0] - 1.0).abs() < 1e-3);
        assert!((s / smooth[0] - 1.0).abs() < 1e-6);
    }
}

#[test]
fn wavefunction_columns() {
    let (h, rows) = csv(&ok(&[
        "wavefunction", "--particles", "14", "--g-over-ns", "-0.6", "--epsilon", "0.6", "--state", "0",
    ]));
    assert_eq!(h, ["p", "exact", "primitive", "uniform", "U_minus", "U_plus"]);
    assert_eq!(rows.len(), 15);
    for c in 1..=3 {
        let s: f64 = rows.iter().map(|r| num(&r[c])).sum();
        assert!((s - 1.0).abs() < 1e-5);
    }
    assert!(rows.iter().all(|r| num(&r[4]) <= num(&r[5])));

    let out = bosesemi(&[
        "wavefunction", "--particles", "14", "--g-over-ns", "-0.6", "--epsilon", "0.6", "--state", "2",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("uniform column left empty"));
    let (_, rows) = csv(&String::from_utf8(out.stdout).unwrap());
    assert!(rows.iter().all(|r| r[3].is_empty() && !r[2].is_empty()));
}

#[test]
fn portrait_grid_and_fixed_points() {
    let (h, rows) = csv(&ok(&[
        "portrait", "--particles", "10", "--g-over-ns", "-3", "--epsilon", "-0.5", "--grid", "20x30",
    ]));
    assert_eq!(rows.iter().filter(|r| r[0] == "grid").count(), 600);
    let p = ModelParams::with_g_over_ns(10, -0.5, 1.0, -3.0);
    let fixed: Vec<_> = rows.iter().filter(|r| r[0] == "fixed").collect();
    assert_eq!(fixed.len(), 4);
    for r in fixed {
        let pt = PhasePoint::new(num(&r[col(&h, "q")]), num(&r[col(&h, "p")]));
        let e = meanfield::hamiltonian(&p, pt).unwrap();
        assert!((e - num(&r[col(&h, "H")])).abs() < 1e-4);
    }
    assert_eq!(rows.iter().filter(|r| r[0] == "separatrix").count(), 1);
    let (_, sub) = csv(&ok(&["portrait", "--particles", "10", "--g-over-ns", "-1", "--epsilon", "-0.5", "--grid", "4x4"]));
    assert_eq!(sub.iter().filter(|r| r[0] == "separatrix").count(), 0);
}

#[test]
fn json_mirrors_csv() {
    let args = ["spectrum", "--particles", "6", "--g-over-ns", "-2", "--epsilon", "0.3"];
    let (h, rows) = csv(&ok(&args));
    let mut jargs = args.to_vec();
    jargs.extend(["--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&ok(&jargs)).unwrap();
    assert_eq!(v["config"]["command"], "spectrum");
    assert_eq!(v["config"]["g_over_ns"], -2.0);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), rows.len());
    let keys: Vec<&String> = results[0].as_object().unwrap().keys().collect();
    assert_eq!(keys, h.iter().collect::<Vec<_>>());
    assert_eq!(results[3]["E_exact"].as_f64().unwrap(), num(&rows[3][1]));
}

#[test]
fn output_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        ok(&[
            "sweep", "--particles", "10", "--g-over-ns", "-3", "--sweep", "-2:2:21", "--out", path.to_str().unwrap(),
        ]);
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
}

#[test]
fn failures_exit_non_zero() {
    let out = bosesemi(&["wavefunction", "--particles", "4", "--g", "-0.1", "--state", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("state index 9"));

    let out = bosesemi(&["spectrum", "--particles", "4", "--g", "-0.1", "--g-over-ns", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bosesemi(&["spectrum", "--particles", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bosesemi(&["portrait", "--particles", "4", "--g", "0", "--grid", "1x5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bosesemi(&["spectrum", "--particles", "4", "--g", "0", "--hbar=-1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thread_cap_from_environment() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_bosesemi"))
            .args(["sweep", "--particles", "6", "--g-over-ns", "-2", "--sweep", "-1:1:9"])
            .env("BOSESEMI_THREADS", v)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, run("3").stdout);
    assert_eq!(run("zero").status.code(), Some(1));
}
