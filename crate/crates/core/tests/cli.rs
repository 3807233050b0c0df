use std::process::Command;

use knotvol::asymfit::{collect_series, fit_growth, FitModel};
use knotvol::cli::{read_csv, run, series_from_rows, CSV_HEADER};
use knotvol::KnotId;

fn run_capture(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("knotvol").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn invariant_at_two() {
    let (code, out, _) =
        run_capture(&["invariant", "--knot", "4_1", "--n", "2", "--mode", "exact"]);
    assert_eq!(code, 0);
    assert!(out.contains("value              5 + 0i"), "{out}");
    let ratio = 2.0 * std::f64::consts::PI * 5f64.ln() / 2.0;
    assert!(out.contains(&format!("{ratio}")), "{out}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["invariant", "--knot", "4_1", "--n", "0"],
        vec!["invariant", "--knot", "7_3", "--n", "5"],
        vec!["invariant", "--knot", "4_1", "--n", "5", "--mode", "fast"],
        vec!["invariant", "--knot", "4_1", "--n", "5", "--n-max", "3"],
        vec!["fit", "--knot", "4_1"],
        vec!["dilog", "--z", "1.0"],
        vec![],
    ] {
        let (code, _, err) = run_capture(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn computational_errors_exit_one() {
    let (code, _, err) = run_capture(&[
        "invariant",
        "--knot",
        "4_1",
        "--n",
        "5000",
        "--mode",
        "direct",
    ]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: "), "{err}");
    let (code, _, _) = run_capture(&["faddeev", "--gamma", "-1", "--p", "0,0"]);
    assert_eq!(code, 1);
}

#[test]
fn volume_lists_selected_point() {
    let (code, out, _) = run_capture(&["volume", "--knot", "5_2"]);
    assert_eq!(code, 0);
    assert!(out.contains("V(5_2) = 2.82812209"), "{out}");
    assert!(out.contains(" * z = 0.33764102137762"), "{out}");
}

#[test]
fn special_functions() {
    let (_, out, _) = run_capture(&["dilog", "--z", "-1,0"]);
    assert!(out.contains("-0.822467033424113"), "{out}");
    let (_, out, _) = run_capture(&["lobachevsky", "--theta", "0.5235987755982988"]);
    assert!(out.contains("0.50747080320482"), "{out}");
    let (code, out, _) = run_capture(&[
        "faddeev",
        "--gamma",
        "0.6283185307179586",
        "--p",
        "-0.3,0.1",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("S_gamma("), "{out}");
}

#[test]
fn csv_round_trip_is_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.csv");
    let p = path.to_str().unwrap();
    let (code, _, err) = run_capture(&[
        "invariant",
        "--knot",
        "5_2",
        "--n",
        "10",
        "--n-max",
        "60",
        "--step",
        "5",
        "--format",
        "csv",
        "--out",
        p,
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));

    let from_file = series_from_rows(&read_csv(&path).unwrap(), None).unwrap();
    let in_process = collect_series(KnotId::FiveTwo, 10, 60, 5).unwrap();
    assert_eq!(from_file, in_process);
    for model in [FitModel::Linear, FitModel::LinearPlusLog] {
        let a = fit_growth(&from_file, model).unwrap();
        let b = fit_growth(&in_process, model).unwrap();
        assert_eq!(a.a.to_bits(), b.a.to_bits());
        assert_eq!(a.b.to_bits(), b.b.to_bits());
        assert_eq!(a.c.to_bits(), b.c.to_bits());
    }

    let (_, via_file, _) = run_capture(&["fit", "--in", p, "--format", "csv"]);
    let (_, direct, _) = run_capture(&[
        "fit", "--knot", "5_2", "--n-min", "10", "--n-max", "60", "--step", "5", "--format", "csv",
    ]);
    assert_eq!(via_file, direct);
}

#[test]
fn fit_rejects_mismatched_knot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let p = path.to_str().unwrap();
    run_capture(&[
        "invariant",
        "--knot",
        "4_1",
        "--n",
        "2",
        "--n-max",
        "9",
        "--format",
        "csv",
        "--out",
        p,
    ]);
    let (code, _, _) = run_capture(&["fit", "--in", p, "--knot", "6_1"]);
    assert_eq!(code, 1);
}

#[test]
fn deterministic_across_thread_counts() {
    let base = run_capture(&["invariant", "--knot", "6_1", "--n", "40", "--format", "csv"]).1;
    for t in ["2", "5"] {
        let other = run_capture(&[
            "invariant",
            "--knot",
            "6_1",
            "--n",
            "40",
            "--format",
            "csv",
            "--threads",
            t,
        ])
        .1;
        assert_eq!(base, other);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_knotvol");
    let ok = Command::new(bin)
        .args(["invariant", "--knot", "6_1", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("|<L>|"));
    let bad = Command::new(bin)
        .args(["invariant", "--knot", "4_1", "--n", "0"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("Usage"));
}
