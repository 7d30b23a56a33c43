use std::fs;

use kinsv_cli::cli_main;

fn args(list: &[&str]) -> Vec<String> {
    std::iter::once("kinsv")
        .chain(list.iter().copied())
        .map(String::from)
        .collect()
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("alpha1");
    let code = cli_main(args(&[
        "run",
        "--scenario",
        "uniform_rain_alpha",
        "--set",
        "alpha=1",
        "--set",
        "cells=50",
        "--out",
        out.to_str().unwrap(),
        "--snapshots",
        "0.5,1",
        "--probes",
        "2.5",
    ]));
    assert_eq!(code, 0);
    for f in [
        "probes.csv",
        "diagnostics.csv",
        "snapshot_0.5.csv",
        "snapshot_1.csv",
    ] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let probes = fs::read_to_string(out.join("probes.csv")).unwrap();
    assert_eq!(probes.lines().next(), Some("t,probe_x,h,q,u"));
    // alpha = 1 keeps q at its initial value
    let last = probes.lines().last().unwrap();
    let q: f64 = last.split(',').nth(3).unwrap().parse().unwrap();
    assert!((q - 1.0).abs() < 1e-12, "{last}");
}

#[test]
fn empty_probe_list_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.toml");
    fs::write(
        &cfg,
        "base = \"lake_at_rest\"\n[overrides]\nfinal_time = 0.01\n",
    )
    .unwrap();
    let out = dir.path().join("o");
    let code = cli_main(args(&[
        "run",
        "--scenario",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    assert_eq!(
        fs::read_to_string(out.join("probes.csv"))
            .unwrap()
            .trim_end(),
        "t,probe_x,h,q,u"
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let go = |name: &str| {
        let out = dir.path().join(name);
        let code = cli_main(args(&[
            "run",
            "--scenario",
            "filling_lake",
            "--set",
            "final_time=0.5",
            "--out",
            out.to_str().unwrap(),
            "--snapshots",
            "0.5",
        ]));
        assert_eq!(code, 0);
        out
    };
    let (a, b) = (go("a"), go("b"));
    for f in ["probes.csv", "diagnostics.csv", "snapshot_0.5.csv"] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f} differs"
        );
    }
}

#[test]
fn failures_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let out = out.to_str().unwrap();
    assert_eq!(
        cli_main(args(&["run", "--scenario", "nope", "--out", out])),
        1
    );
    assert_eq!(
        cli_main(args(&[
            "run",
            "--scenario",
            "flume",
            "--set",
            "cfl=1.5",
            "--out",
            out
        ])),
        1
    );
    assert_eq!(
        cli_main(args(&[
            "run",
            "--scenario",
            "flume",
            "--set",
            "alpha",
            "--out",
            out
        ])),
        2
    );
    assert_eq!(
        cli_main(args(&[
            "run",
            "--scenario",
            "flume",
            "--out",
            out,
            "--probes",
            "9"
        ])),
        1
    );
}

#[test]
fn verify_single_suite() {
    assert_eq!(cli_main(args(&["verify", "--suite", "moments"])), 0);
    assert_eq!(cli_main(args(&["verify", "--suite", "legacy"])), 0);
}
