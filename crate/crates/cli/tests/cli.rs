use std::path::Path;
use std::process::{Command, Output};

use kpwave::io::{read_field, RunManifest};
use tempfile::tempdir;

fn kpwave(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kpwave"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn manifest(out: &Path, command: &str) -> RunManifest {
    let p = out.join(format!("{command}_manifest.toml"));
    RunManifest::from_toml(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Every listed output exists and every file in the directory is listed.
fn assert_outputs_complete(out: &Path, m: &RunManifest) {
    for o in &m.outputs {
        assert!(Path::new(o).exists(), "listed output {o} is missing");
    }
    for e in std::fs::read_dir(out).unwrap() {
        let p = e.unwrap().path();
        assert!(m.outputs.iter().any(|o| Path::new(o) == p), "{} not listed", p.display());
    }
}

#[test]
fn selftest_passes() {
    let d = tempdir().unwrap();
    let o = kpwave(d.path(), &["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("PASS") && !s.contains("FAIL"));
}

#[test]
fn unknown_subcommand_and_bad_flags_exit_one() {
    let d = tempdir().unwrap();
    assert_eq!(kpwave(d.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(kpwave(d.path(), &["dispersion", "--beta", "tall"]).status.code(), Some(1));
    assert_eq!(kpwave(d.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_config_exits_one() {
    let d = tempdir().unwrap();
    let cfg = d.path().join("run.toml");
    std::fs::write(&cfg, "alpha = 0.5\ncolour = \"blue\"\n").unwrap();
    let o = kpwave(d.path(), &["--config", cfg.to_str().unwrap(), "dispersion"]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(&cfg, "alpha = [1, 2\n").unwrap();
    let o = kpwave(d.path(), &["--config", cfg.to_str().unwrap(), "dispersion"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn validation_errors_exit_one() {
    let d = tempdir().unwrap();
    // band edge delta/eps beyond the grid
    let o = kpwave(d.path(), &["solve", "--alpha", "0", "--beta", "1", "--eps", "0.001", "--n", "32"]);
    assert_eq!(o.status.code(), Some(1));
    // alpha out of range
    assert_eq!(kpwave(d.path(), &["dispersion", "--alpha", "2"]).status.code(), Some(1));
    // eps list not decreasing
    let o = kpwave(d.path(), &["continue", "--alpha", "0", "--beta", "1", "--eps", "0.1,0.2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(kpwave(d.path(), &["reconstruct", "--input", "missing.csv"]).status.code(), Some(1));
}

#[test]
fn dispersion_with_beta_auto() {
    let d = tempdir().unwrap();
    let o = kpwave(d.path(), &["dispersion", "--alpha", "1", "--beta", "auto"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let m = manifest(d.path(), "dispersion");
    let beta = m.parameters["beta"].as_float().unwrap();
    let star = kpwave::dispersion::derived_constants(1.0).unwrap().beta_star;
    assert!((beta - star - 0.1).abs() < 1e-15);
    assert_outputs_complete(d.path(), &m);
    assert!(m.outputs.iter().any(|o| o.ends_with(".csv")));
}

#[test]
fn continue_example_emits_its_table() {
    let d = tempdir().unwrap();
    let o = kpwave(d.path(), &["continue", "--k", "1", "--alpha", "0", "--beta", "1", "--eps", "0.2,0.1,0.05"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let table = d.path().join("continue_continuation.csv");
    let mut r = csv::Reader::from_path(&table).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[0], "eps");
    assert!(header.iter().any(|h| h == "dist_y1"));
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    let dist: Vec<f64> = rows.iter().map(|x| x[4].parse().unwrap()).collect();
    assert!(dist.windows(2).all(|w| w[1] < w[0]), "{dist:?}");
    let m = manifest(d.path(), "continue");
    assert_outputs_complete(d.path(), &m);
    assert_eq!(m.parameters["eps"].as_array().unwrap().len(), 3);
    assert_eq!(m.threads, 1);
}

#[test]
fn binary_fields_and_reconstruction() {
    let d = tempdir().unwrap();
    let o = kpwave(d.path(), &["--binary", "solve", "--alpha", "0", "--beta", "1", "--eps", "0.2", "--n", "128", "--l", "30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let m = manifest(d.path(), "solve");
    assert_outputs_complete(d.path(), &m);
    let zeta = m.outputs.iter().find(|o| o.ends_with(".bin")).expect("binary field").clone();
    let z = read_field(Path::new(&zeta)).unwrap();
    assert_eq!(z.grid().nx(), 128);

    let r = tempdir().unwrap();
    let o = kpwave(r.path(), &["reconstruct", "--input", &zeta, "--eps", "0.2", "--alpha", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let m = manifest(r.path(), "reconstruct");
    assert_outputs_complete(r.path(), &m);
    assert_eq!(m.inputs, vec![zeta]);
    let eta = m.outputs.iter().find(|o| o.contains("eta") && o.ends_with(".csv")).expect("eta field");
    let eta = read_field(Path::new(eta)).unwrap();
    // default grid covers the cell at the same size: nodes coincide
    let diff = eta.sub(&z.scale(0.04)).max_abs();
    assert!(diff < 1e-12 * z.max_abs().max(1.0), "{diff}");
}

#[test]
fn config_values_apply_and_flags_override() {
    let d = tempdir().unwrap();
    let cfg = d.path().join("run.toml");
    std::fs::write(&cfg, "alpha = 0.5\nbeta = \"auto\"\nmu_max = 1\n").unwrap();
    // unknown key (mu_max is a flag, not a config key)
    let o = kpwave(d.path(), &["--config", cfg.to_str().unwrap(), "dispersion"]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(&cfg, "alpha = 0.5\nbeta = 2.0\n").unwrap();
    let out = d.path().join("o");
    let o = kpwave(&out, &["--config", cfg.to_str().unwrap(), "dispersion", "--beta", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let m = manifest(&out, "dispersion");
    assert_eq!(m.parameters["alpha"].as_float(), Some(0.5));
    assert_eq!(m.parameters["beta"].as_float(), Some(3.0));
}

#[test]
fn runs_are_reproducible() {
    let a = tempdir().unwrap();
    let b = tempdir().unwrap();
    let args = ["flatops-check", "--alpha", "0.7", "--beta", "auto", "--seed", "3"];
    assert_eq!(kpwave(a.path(), &args).status.code(), Some(0));
    assert_eq!(kpwave(b.path(), &args).status.code(), Some(0));
    for name in ["flatops-check_identities.csv", "flatops-check_constants.csv"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs");
    }
    assert_eq!(manifest(a.path(), "flatops-check").seed, Some(3));
}
