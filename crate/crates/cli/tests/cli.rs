use std::path::Path;
use std::process::{Command, Output};

use rhop_core::io;
use serde_json::Value;

fn rhop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhop"))
        .args(args)
        .env_remove("RHOP_PRECISION")
        .output()
        .expect("binary runs")
}

fn json_of(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn opuc_writes_alpha_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("alpha.csv");
    let r = rhop(&["opuc", "--weight", "onepluscos", "--n", "8", "--out", out.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("0,0.5,0.0,"));
    let v = io::read_verblunsky_csv(text.as_bytes()).unwrap();
    assert_eq!(v.len(), 8);
    assert!((v.alpha[1].norm() - 1.0 / 3.0).abs() < 1e-14);
    // one-line summary on stdout
    assert_eq!(String::from_utf8(r.stdout).unwrap().lines().count(), 1);
}

#[test]
fn toda_two_by_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("toda.json");
    let r = rhop(&["toda", "--size", "2", "--t", "1.0", "--out", out.to_str().unwrap()]);
    assert!(r.status.success());
    let v = json_of(&out);
    assert!((v["a"][0].as_f64().unwrap() - 2f64.tanh()).abs() < 1e-12);
    assert!((v["b"][0].as_f64().unwrap() - 1.0 / 2f64.cosh()).abs() < 1e-12);
}

#[test]
fn szego_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("szego.json");
    let r = rhop(&["szego", "--s", "1", "--n", "30", "--format", "json", "--out", out.to_str().unwrap()]);
    assert!(r.status.success());
    let v = json_of(&out);
    assert_eq!(v["prediction"].as_f64().unwrap(), 0.25);
    assert!(v["abs_err"].as_f64().unwrap() <= 1e-4);
    assert!((v["measured"].as_f64().unwrap() - 0.25).abs() <= 1e-4);
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &["moments", "--weight", "expcos:s=1", "--n", "12"],
        &["oprl", "--weight", "quartic:g=1,d=0", "--n", "9"],
        &["reldet", "--weight", "gaussbump:c=0.5", "--n", "4", "--tnodes", "8"],
        &["tinv-decay", "--n", "10"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut bytes = Vec::new();
        for k in 0..2 {
            let out = dir.path().join(format!("{i}-{k}"));
            let mut a = args.to_vec();
            a.extend(["--seed", "11", "--out", out.to_str().unwrap()]);
            assert!(rhop(&a).status.success(), "{args:?}");
            bytes.push(std::fs::read(&out).unwrap());
        }
        assert_eq!(bytes[0], bytes[1], "{args:?}");
    }
}

#[test]
fn artifacts_reparse_into_core_types() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name);
    let run = |args: &[&str], name: &str| {
        let p = path(name);
        let mut a = args.to_vec();
        a.extend(["--out", p.to_str().unwrap()]);
        let r = rhop(&a);
        assert!(r.status.success(), "{args:?}: {}", String::from_utf8_lossy(&r.stderr));
        std::fs::read(p).unwrap()
    };
    let m = run(&["moments", "--weight", "expcos:s=0.5", "--n", "6"], "m.csv");
    let parsed = io::read_moments_csv(&m[..]).unwrap();
    let direct = rhop_core::measures::circle_moments(&rhop_core::measures::WeightSpec::exp_cos(0.5), 6).unwrap();
    assert!(io::moments_equal(&parsed, &direct));

    let rec = run(&["oprl", "--weight", "gauss", "--n", "5", "--format", "json"], "rec.json");
    let rec: rhop_core::opline::RecurrenceLine = io::from_json(std::str::from_utf8(&rec).unwrap()).unwrap();
    assert!((rec.b[2] - 1.5f64.sqrt()).abs() < 1e-12);

    let j = run(&["jacobi", "--weight", "gauss", "--n", "4", "--format", "json"], "j.json");
    let j: rhop_core::opline::JacobiMatrix = io::from_json(std::str::from_utf8(&j).unwrap()).unwrap();
    assert_eq!(j.n, 4);
    let mu = run(&["jacobi", "--weight", "gauss", "--n", "4"], "mu.csv");
    assert_eq!(io::read_discrete_measure_csv(&mu[..]).unwrap().atoms.len(), 4);

    let d = run(&["tinv-decay", "--n", "8"], "d.csv");
    assert_eq!(io::read_decay_csv(&d[..]).unwrap().len(), 9);

    let rel = run(&["reldet", "--weight", "expcos:s=1", "--n", "10"], "rel.json");
    let rel: rhop_core::dets::RelDetReport = io::from_json(std::str::from_utf8(&rel).unwrap()).unwrap();
    assert!(rel.abs_err <= 1e-6 && rel.nodes == 24);

    let rh = run(&["rhp-solve", "--weight", "onepluscos", "--n", "3", "--format", "json"], "rh.json");
    let rh: rhop_core::rhp::RhReport = io::from_json(std::str::from_utf8(&rh).unwrap()).unwrap();
    assert!(rh.jump_residual < 1e-8 && rh.condition.is_some());
    let ev = run(&["rhp-solve", "--weight", "onepluscos", "--n", "3"], "ev.csv");
    assert_eq!(io::read_matrix_evals_csv(&ev[..]).unwrap().0.len(), 16);

    for cmd in ["cmv", "wall", "schur", "toeplitz", "onepoint", "rhp-verify"] {
        run(&[cmd, "--weight", "onepluscos", "--n", "6"], cmd);
    }
    run(&["hankel", "--weight", "gauss", "--n", "6"], "hankel");
    run(&["hankel-limit", "--weight", "gaussbump:c=0.5", "--n", "6"], "hankel-limit");
}

#[test]
fn config_file_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "weight = \"gauss\"\nn = 3\nformat = \"json\"\n").unwrap();
    let out = dir.path().join("h.json");
    let r = Command::new(env!("CARGO_BIN_EXE_rhop"))
        .args(["hankel", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .env("RHOP_PRECISION", "exact")
        .output()
        .unwrap();
    assert!(r.status.success());
    assert!(String::from_utf8(r.stdout).unwrap().contains("(exact)"));
    assert_eq!(json_of(&out).as_array().unwrap().len(), 4);

    std::fs::write(&cfg, "weight = \"gauss\"\ncolour = \"red\"\n").unwrap();
    let r = rhop(&["hankel", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn errors_are_machine_readable() {
    let cases: [(&[&str], i32, &str); 4] = [
        (&["opuc", "--weight", "nosuch"], 2, "parse"),
        (&["opuc", "--weight", "gauss"], 2, "invalid_input"),
        (&["opuc", "--n", "4"], 2, "invalid_input"),
        (&["szego", "--weight", "onepluscos", "--n", "5"], 3, "degenerate_measure"),
    ];
    for (args, status, code) in cases {
        let r = rhop(args);
        assert_eq!(r.status.code(), Some(status), "{args:?}");
        let e: Value = serde_json::from_str(String::from_utf8(r.stderr).unwrap().trim()).unwrap();
        assert_eq!(e["code"], code);
        assert!(e["module"].is_string() && e["message"].is_string());
    }
    let r = rhop(&["toda", "--size", "4", "--t", "400"]);
    assert_eq!(r.status.code(), Some(3));
    let r = rhop(&["cmv", "--weight", "onepluscos", "--format", "csv"]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn verify_all_fast_reports_every_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let r = rhop(&["verify-all", "--suite", "fast", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stdout));
    let v = json_of(&out);
    assert_eq!(v["seed"], 3);
    let ids: Vec<&str> = v["criteria"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, (1..=12).map(|k| format!("C{k}")).collect::<Vec<_>>());
    assert!(v["seconds"].as_f64().unwrap() < 30.0);
}
