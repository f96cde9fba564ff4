use std::path::Path;

use tomobell::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["tomobell"];
    argv.extend_from_slice(args);
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn radon_check_passes() {
    let (code, out, err) = run(&[
        "tomogram",
        "--state",
        "epr",
        "--lambda",
        "0.54",
        "--check-radon",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("max |closed - radon|"));
    assert_eq!(rows(&out).len(), 3 * 81);
}

#[test]
fn invalid_lambda_exits_with_config_code() {
    let (code, _, err) = run(&["tomogram", "--state", "epr", "--lambda", "1.2"]);
    assert_eq!(code, 2);
    assert!(err.contains("lambda") && err.contains("[0, 1)"), "{err}");
}

#[test]
fn impossible_tolerance_exits_with_accuracy_code() {
    let (code, _, err) = run(&[
        "tomogram",
        "--state",
        "epr",
        "--lambda",
        "0.54",
        "--check-radon",
        "--radon-tol",
        "1e-30",
    ]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn unknown_flags_and_mismatched_parameters_are_rejected() {
    assert_eq!(run(&["tomogram", "--bogus"]).0, 2);
    assert_eq!(run(&["tomogram", "--state", "epr", "--n", "3"]).0, 2);
    assert_eq!(run(&["probs", "--state", "fock-pair", "--n", "0"]).0, 2);
}

#[test]
fn vacuum_tomogram_is_angle_independent() {
    let (code, out, _) = run(&[
        "tomogram", "--state", "epr", "--lambda", "0", "--theta2", "0,1,2.5",
    ]);
    assert_eq!(code, 0);
    let r = rows(&out);
    let per_angle = r.len() / 3;
    for i in 0..per_angle {
        for k in 1..3 {
            assert!((r[i][5] - r[i + k * per_angle][5]).abs() < 1e-15);
        }
    }
}

#[test]
fn probs_accepts_braced_lists() {
    let (code, out, _) = run(&[
        "probs",
        "--state",
        "epr",
        "--lambda",
        "{0.20,0.54,0.96}",
        "--points",
        "37",
    ]);
    assert_eq!(code, 0);
    let r = rows(&out);
    assert_eq!(r.len(), 3 * 37);
    assert!(r
        .iter()
        .all(|row| row[4..].iter().all(|&w| w <= 0.5 + 1e-9)));
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    write(&cfg, "# defaults\nlambda = 0.2\nx-points = 3\n");
    let cfg = cfg.to_str().unwrap();
    let (_, from_file, _) = run(&["--config", cfg, "tomogram", "--state", "epr"]);
    assert!(rows(&from_file).iter().all(|r| r[0] == 0.2));
    assert_eq!(rows(&from_file).len(), 3 * 9);
    let (_, flagged, _) = run(&[
        "--config", cfg, "tomogram", "--state", "epr", "--lambda", "0.54",
    ]);
    assert!(rows(&flagged).iter().all(|r| r[0] == 0.54));

    let bad = dir.path().join("bad.cfg");
    write(&bad, "no-such-option = 1\n");
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "tomogram"]).0, 2);
    assert_eq!(run(&["--config", "/nonexistent/cfg", "tomogram"]).0, 2);
}

#[test]
fn pseudospin_pair_coherent_reports_discrepancy() {
    let (code, out, err) = run(&[
        "pseudospin",
        "--state",
        "pair-coherent",
        "--r",
        "1.05",
        "--angles",
        "tv=0,tup=pi,tvp=pi/2",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("theta_u,"));
    assert!(err.contains("\"closed_form_exceeds_one\": true"));
    let b_max = rows(&out)
        .iter()
        .map(|r| *r.last().unwrap())
        .fold(f64::MIN, f64::max);
    assert!(b_max > 2.0);
}

#[test]
fn bell_scan_reports_interval() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("scan.csv");
    let (code, out, _) = run(&[
        "bell-scan",
        "--state",
        "pair-coherent",
        "--r",
        "0.5:1.5:0.05",
        "--mode",
        "tomographic",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("B > 2 for parameter in"));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_path.with_extension("json")).unwrap())
            .unwrap();
    assert!(summary["max_B"].as_f64().unwrap() > 2.0);
    assert_eq!(summary["violating_intervals"].as_array().unwrap().len(), 1);
}

#[test]
fn sample_writes_batch_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.csv");
    let args = [
        "sample",
        "--state",
        "fock-pair",
        "--n",
        "1",
        "--count",
        "2000",
        "--seed",
        "5",
        "--out",
        p.to_str().unwrap(),
    ];
    assert_eq!(run(&args).0, 0);
    let first = std::fs::read(&p).unwrap();
    assert_eq!(run(&args).0, 0);
    assert_eq!(first, std::fs::read(&p).unwrap());
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(p.with_extension("json")).unwrap()).unwrap();
    assert_eq!(side["count"], 2000);
    assert_eq!(side["seed"], 5);
}

#[test]
fn figures_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let (code, _, err) = run(&[
            "figures",
            "--out-dir",
            d.path().to_str().unwrap(),
            "--points",
            "61",
        ]);
        assert_eq!(code, 0, "{err}");
    }
    let ma: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.path().join("manifest.json")).unwrap())
            .unwrap();
    let mb: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(b.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(ma["files"], mb["files"]);
    assert_eq!(ma["files"].as_array().unwrap().len(), 6);
    assert_eq!(ma["config"]["command"]["command"], "figures");
    assert_eq!(ma["config"]["command"]["points"], 61);
}

#[test]
fn fock_pair_probabilities_have_period_two_pi_over_n() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run(&[
            "figures",
            "--out-dir",
            dir.path().to_str().unwrap(),
            "--points",
            "361"
        ])
        .0,
        0
    );
    let csv = std::fs::read_to_string(dir.path().join("fig2a.csv")).unwrap();
    let n5: Vec<Vec<f64>> = rows(&csv).into_iter().filter(|r| r[0] == 5.0).collect();
    assert_eq!(n5.len(), 361);
    // 360 steps of one degree; a shift of 72 steps is one period
    for i in 0..(361 - 72) {
        assert!((n5[i][2] - n5[i + 72][2]).abs() < 1e-9);
    }
    let swing = n5.iter().map(|r| r[2]).fold(f64::MIN, f64::max)
        - n5.iter().map(|r| r[2]).fold(f64::MAX, f64::min);
    assert!(swing > 1e-3);
}
