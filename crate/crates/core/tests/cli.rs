use std::path::Path;
use std::process::{Command, Output};

use stdf::dgp::{sample_dgp, DgpSpec, RngStream};
use stdf::harness::{read_metrics_csv, RunManifest};

fn stdf_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stdf-sim"))
        .args(args)
        .env_remove("STDF_WORKERS")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_for_every_subcommand() {
    for sub in [vec!["--help"], vec!["simulate", "--help"], vec!["plot", "--help"], vec!["estimate", "--help"]] {
        let out = stdf_sim(&sub);
        assert_eq!(out.status.code(), Some(0), "{sub:?}");
        assert!(stdout(&out).contains("Usage"));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(stdf_sim(&["simulate", "--dgp", "gumbel"]).status.code(), Some(2));
    assert_eq!(stdf_sim(&["simulate", "--n", "0", "--reps", "1"]).status.code(), Some(2));
    assert_eq!(stdf_sim(&["estimate", "--data", "x.csv", "--k", "0", "--points", "1,1"]).status.code(), Some(2));
    assert_eq!(stdf_sim(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn simulate_plot_and_rerun_from_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let out = stdf_sim(&["simulate", "--dgp", "cauchy", "--reps", "4", "--seed", "3", "--out", path(&first)]);
    assert!(out.status.success(), "{}", stderr(&out));

    let csv = first.join("cauchy.csv");
    let table = read_metrics_csv(&csv).unwrap();
    assert_eq!(table.rows.len(), 160);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 161);

    let manifest_path = first.join("cauchy.manifest.json");
    let manifest = RunManifest::read(&manifest_path).unwrap();
    assert_eq!((manifest.dgp.as_str(), manifest.seed, manifest.csv.as_str()), ("cauchy", 3, "cauchy.csv"));
    assert_eq!(manifest.config.reps, 4);
    assert_eq!(manifest.fingerprint, manifest.config.fingerprint());

    // same arguments, different thread count
    let again = dir.path().join("again");
    let out = stdf_sim(&[
        "simulate", "--dgp", "cauchy", "--reps", "4", "--seed", "3", "--workers", "2", "--out", path(&again),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&csv).unwrap(), std::fs::read(again.join("cauchy.csv")).unwrap());

    let replay = dir.path().join("replay");
    let out = stdf_sim(&["simulate", "--config", path(&manifest_path), "--out", path(&replay)]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(std::fs::read(&csv).unwrap(), std::fs::read(replay.join("cauchy.csv")).unwrap());
    let replayed = RunManifest::read(&replay.join("cauchy.manifest.json")).unwrap();
    assert_eq!(replayed.config, manifest.config);

    let plots = dir.path().join("plots");
    let out = stdf_sim(&["plot", "--in", path(&csv), "--out", path(&plots)]);
    assert!(out.status.success(), "{}", stderr(&out));
    for metric in ["squared_bias", "variance", "mse"] {
        let svg = std::fs::read_to_string(plots.join(format!("cauchy_{metric}.svg"))).unwrap();
        assert!(svg.contains("<svg"), "{metric}");
    }
}

#[test]
fn malformed_metrics_csv_names_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    std::fs::write(
        &csv,
        "dgp,estimator,k,squared_bias,variance,mse,reps,failures\n\
         cauchy,empirical,1,0.1,0.2,0.3,10,0\n\
         cauchy,empirical,eleven,0.1,0.2,0.3,10,0\n",
    )
    .unwrap();
    let out = stdf_sim(&["plot", "--in", path(&csv), "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("row 2"), "{}", stderr(&out));
}

#[test]
fn estimate_on_the_toy_sample() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("toy.csv");
    std::fs::write(&data, "1,4\n2,3\n3,2\n4,1\n").unwrap();
    let out = stdf_sim(&["estimate", "--data", path(&data), "--k", "2", "--points", "1,1;1,0"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x1,x2,k,estimator,rho_method,rho,estimate");
    assert_eq!(lines[1], "1,1,2,empirical,none,,2");
    assert_eq!(lines[2], "1,0,2,empirical,none,,1");
}

#[test]
fn estimate_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.csv");
    std::fs::write(&data, "1,4\n2,oops\n").unwrap();
    let out = stdf_sim(&["estimate", "--data", path(&data), "--k", "1", "--points", "1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("row 2, column 2"), "{}", stderr(&out));

    std::fs::write(&data, "1,4\n2,3\n").unwrap();
    let out = stdf_sim(&["estimate", "--data", path(&data), "--k", "1", "--points", "1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = stdf_sim(&["estimate", "--data", path(&data), "--k", "1", "--points", "1,1", "--estimator", "dot"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrected_estimate_on_t4_data() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("t4.csv");
    let sample = sample_dgp(&DgpSpec::by_name("t4").unwrap(), 1000, RngStream::new(8, 1, 0)).unwrap();
    let text: String = sample.rows().map(|r| format!("{},{}\n", r[0], r[1])).collect();
    std::fs::write(&data, text).unwrap();
    let out = stdf_sim(&[
        "estimate", "--data", path(&data), "--k", "200", "--points", "0.5,0.5;0.2,0.8", "--estimator", "dot",
        "--rho-method", "penalized-agg",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    for (line, (x1, x2)) in text.lines().skip(1).zip([(0.5, 0.5), (0.2, 0.8)]) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(&cells[2..5], ["200", "dot", "penalized-agg"]);
        let rho: f64 = cells[5].parse().unwrap();
        let value: f64 = cells[6].parse().unwrap();
        assert!(rho < 0.0, "{line}");
        assert!(value >= f64::max(x1, x2) && value <= x1 + x2, "{line}");
    }
}
