use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ecsrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecsrel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// fig2 document with `edit` applied, written into `dir`.
fn fig2_variant(dir: &Path, name: &str, edit: impl FnOnce(&mut Value)) -> std::path::PathBuf {
    let mut doc: Value = serde_json::from_str(ecsrel_core::bundled::FIG2_JSON).unwrap();
    edit(&mut doc);
    let p = dir.join(name);
    fs::write(&p, doc.to_string()).unwrap();
    p
}

/// File contents without the manifest line.
fn body(p: &Path) -> String {
    let text = fs::read_to_string(p).unwrap();
    assert!(text.starts_with("# manifest: {"), "{}", p.display());
    text.split_once('\n').unwrap().1.to_string()
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&ecsrel(&["validate", "bundled:fig2"])), 0);

    let cycle = fig2_variant(dir.path(), "cycle.json", |d| d["cables"][5]["normal_state"] = 1.into());
    let o = ecsrel(&["validate", path(&cycle)]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stdout));

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{ \"nodes\": [").unwrap();
    assert_eq!(code(&ecsrel(&["validate", path(&broken)])), 1);
    assert_eq!(code(&ecsrel(&["validate", "bundled:nowhere"])), 1);
}

#[test]
fn ra1_parallel_output_matches_serial() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("serial"), dir.path().join("pool"));
    let o = ecsrel(&["ra1", "bundled:ring2", "--out", path(&a)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = ecsrel(&["ra1", "bundled:ring2", "--parallel", "4", "--out", path(&b)]);
    assert_eq!(code(&o), 0);
    for f in ["nodes.csv", "plans.csv"] {
        assert_eq!(body(&a.join(f)), body(&b.join(f)), "{f}");
    }
    let (sa, sb) = (summary(&a), summary(&b));
    assert_eq!(sa["eent_mwh_per_year"], sb["eent_mwh_per_year"]);
    assert!(sa["manifest"]["tool"].as_str().unwrap().starts_with("ecsrel "));
    assert!(sa["manifest"]["solver"].is_string());
}

#[test]
fn ra1_planning_reports_open_cables() {
    let dir = tempfile::tempdir().unwrap();
    let o = ecsrel(&["ra1", "bundled:fig2", "--mode", "planning", "--out", path(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(summary(dir.path())["normally_open"].as_array().unwrap().len(), 1);
}

#[test]
fn ra2_ranks_deployments() {
    let dir = tempfile::tempdir().unwrap();
    let o = ecsrel(&[
        "ra2",
        "bundled:fig2",
        "--deployments",
        "feeder-only",
        "smart",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = body(&dir.path().join("deployments.csv"));
    let rows: Vec<Vec<&str>> = table.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0][0], rows[0][1]), ("1", "smart"));
    assert_eq!((rows[1][0], rows[1][1]), ("2", "feeder_only"));
    let eent = |r: &Vec<&str>| r[2].parse::<f64>().unwrap();
    assert!(eent(&rows[0]) <= eent(&rows[1]));
}

#[test]
fn ra2_uses_file_devices_without_deployments() {
    let dir = tempfile::tempdir().unwrap();
    let o = ecsrel(&["ra2", "bundled:fig2", "--out", path(dir.path())]);
    assert_eq!(code(&o), 0);
    let s = summary(dir.path());
    assert_eq!(s["benefit"]["n_cb"], 2);
    assert_eq!(s["benefit"]["n_sw"], 12);
}

#[test]
fn smcs_zero_rates_and_single_year() {
    let dir = tempfile::tempdir().unwrap();
    let calm = fig2_variant(dir.path(), "calm.json", |d| {
        for n in d["nodes"].as_array_mut().unwrap() {
            if n["kind"] == "turbine" {
                n["failure_rate"] = 0.0.into();
            }
        }
        for c in d["cables"].as_array_mut().unwrap() {
            c["failure_rate"] = 0.0.into();
        }
    });
    let out = dir.path().join("calm");
    let o = ecsrel(&["smcs", path(&calm), "--years", "500", "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["eent_sim_mwh_per_year"], 0.0);
    assert_eq!(s["eent_analytic_mwh_per_year"], 0.0);
    assert_eq!(s["manifest"]["seed"], 1);

    let one = dir.path().join("one");
    let o = ecsrel(&["smcs", "bundled:fig2", "--years", "1", "--out", path(&one)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(body(&one.join("convergence.csv")).lines().count(), 2);
    assert_eq!(code(&ecsrel(&["smcs", "bundled:fig2", "--years", "0"])), 1);
}

#[test]
fn sweep_families() {
    let dir = tempfile::tempdir().unwrap();
    let o = ecsrel(&[
        "sweep",
        "bundled:fig2",
        "--vary",
        "link-cables",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = body(&dir.path().join("sweep.csv"));
    assert_eq!(rows.lines().count(), 2);
    assert!(rows.lines().nth(1).unwrap().contains(",true,"));

    let out = dir.path().join("state");
    let o = ecsrel(&[
        "sweep",
        "bundled:ring2",
        "--vary",
        "operating-state",
        "--parallel",
        "2",
        "--out",
        path(&out),
    ]);
    assert_eq!(code(&o), 0);
    let eent: Vec<f64> = body(&out.join("sweep.csv"))
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert!(eent.len() >= 2);
    assert!(eent.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9)));
}
