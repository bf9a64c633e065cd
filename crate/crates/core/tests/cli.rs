use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn aeconv(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aeconv"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn report(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("verdict.json")).unwrap()).unwrap()
}

fn profile(v: &Value) -> Vec<f64> {
    v["tail_profile"].as_array().unwrap().iter().map(|p| p["value"].as_f64().unwrap()).collect()
}

#[test]
fn power_converges_with_decreasing_profile() {
    let dir = tempfile::tempdir().unwrap();
    let o = aeconv(&["analyze", "--mode", "kappa", "--input", "power", "--phi", "arctan"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    for f in ["verdict.json", "table.csv", "tail_profile.csv"] {
        assert!(dir.path().join(f).is_file(), "{f} missing");
    }
    let v = report(dir.path());
    assert_eq!(v["verdict"], "CONVERGES");
    let s = profile(&v);
    assert!(s.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn typewriter_diverges() {
    let dir = tempfile::tempdir().unwrap();
    let o = aeconv(&["analyze", "--mode", "kappa", "--input", "typewriter"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let s = profile(&report(dir.path()));
    assert!(s.iter().all(|v| (v - std::f64::consts::FRAC_PI_4).abs() < 1e-3));
}

#[test]
fn short_window_is_inconclusive_and_warns() {
    let dir = tempfile::tempdir().unwrap();
    let o = aeconv(&["analyze", "--mode", "kappa", "--input", "typewriter", "--m-cap", "n+1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let v = report(dir.path());
    let warnings = v["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("still rising")));
    assert!(String::from_utf8_lossy(&o.stderr).contains("still rising"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# typewriter with a short window\ninput = typewriter\nm_cap = n+1\nn_grid = 4,8,16,32\n").unwrap();
    let out = dir.path().join("a");
    let o = aeconv(&["analyze", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(report(&out)["n_grid"].as_array().unwrap().len(), 4);

    let out = dir.path().join("b");
    let o = aeconv(&["analyze", "--config", cfg.to_str().unwrap(), "--m-cap", "pass"], &out);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&out)["config"]["m-cap"], "pass");
}

#[test]
fn errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], i32, &str); 5] = [
        (&["analyze", "--input", "power", "--eps-pass", "0.5", "--eps-fail", "0.1"], 3, "eps"),
        (&["analyze", "--input", "power", "--nodes", "many"], 3, "nodes"),
        (&["analyze", "--input", "power", "--mode", "sideways"], 3, "mode"),
        (&["analyze", "--input", "missing.csv"], 4, "missing.csv"),
        (&["analyze", "--input", "no-such-entry"], 4, "no-such-entry"),
    ];
    for (args, code, needle) in cases {
        let o = aeconv(args, dir.path());
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(needle), "{args:?}: {err}");
    }
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "bogus_key = 1\n").unwrap();
    let o = aeconv(&["analyze", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn sampled_csv_input() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("x,weight,f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,f11,f12,f13,f14,f15,f16\n");
    for i in 0..32 {
        let x = (i as f64 + 0.5) / 32.0;
        let row: Vec<String> = (1..=16).map(|k| (x.powi(k) / (k * k * k) as f64).to_string()).collect();
        text.push_str(&format!("{x},{},{}\n", 1.0 / 32.0, row.join(",")));
    }
    let input = dir.path().join("seq.csv");
    std::fs::write(&input, text).unwrap();
    let out = dir.path().join("out");
    let o = aeconv(
        &["analyze", "--input", input.to_str().unwrap(), "--n-grid", "1,2,3,4", "--m-cap", "16"],
        &out,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn fourier_and_spaces_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f");
    let o = aeconv(&["fourier", "--g", "square-wave", "--method", "both", "--antonov"], &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = report(&out);
    assert!(v["details"]["antonov"]["printed"].is_object() || v["details"]["antonov"]["printed"].is_number());
    assert!(v["details"]["method_discrepancy"].as_f64().unwrap() < 1e-6);

    let out = dir.path().join("s");
    let o = aeconv(&["spaces", "--input", "power", "--R", "8", "--N-max", "64"], &out);
    assert!(o.status.code().unwrap() <= 2, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("psi.csv").is_file());
}

#[test]
fn corpus_listing() {
    let o = Command::new(env!("CARGO_BIN_EXE_aeconv")).args(["corpus", "list"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    for name in ["power", "typewriter", "random-walk-2d", "square-wave"] {
        assert!(text.contains(name));
    }
    let o = Command::new(env!("CARGO_BIN_EXE_aeconv"))
        .args(["corpus", "describe", "typewriter"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
