use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const K4: &str = "1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
const K23: &str = "a x\na y\na z\nb x\nb y\nb z\n";
const BILLIARD: &str = "1 2\n2 4\n4 3\n3 1\n1 5\n2 5\n3 5\n4 5\n";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ihara-lab"));
    c.env_remove("IHARA_LAB_TOL");
    c
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", K4);
    let tri = write(&dir, "tri.txt", "1 2\n2 3\n3 1\n");
    let bad = write(&dir, "bad.txt", "1 2 3\n");
    let looped = write(&dir, "loop.txt", "1 1\n");

    let o = run(&["validate", s(&k4)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], "ihara-lab/1");
    assert_eq!(v["pass"], true);

    let o = run(&["validate", s(&tri)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("is a cycle graph"));

    assert_eq!(code(&run(&["validate", "/nonexistent/graph.txt"])), 2);
    assert_eq!(code(&run(&["validate", s(&bad)])), 3);
    assert_eq!(code(&run(&["validate", s(&looped)])), 3);
}

#[test]
fn invalid_graph_rejected_by_other_commands() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", "1 2\n2 3\n3 1\n");
    for cmd in ["zeta", "lambda", "params", "audit", "primes"] {
        assert_eq!(code(&run(&[cmd, s(&tri)])), 1, "{cmd}");
    }
}

#[test]
fn zeta_forms() {
    let dir = TempDir::new().unwrap();
    let billiard = write(&dir, "b.txt", BILLIARD);
    let k4 = write(&dir, "k4.txt", K4);
    let k23 = write(&dir, "k23.txt", K23);

    let v = json(&run(&["zeta", s(&billiard), "--form", "det"]));
    let coeffs: Vec<i64> = v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_i64().unwrap())
        .collect();
    let factor = [1, 0, 3, -8, -4, -32, -8, -32, 32, 0, 48];
    let cube = [1, 0, -3, 0, 3, 0, -1];
    let mut expected = vec![0i64; factor.len() + cube.len() - 1];
    for (i, a) in factor.iter().enumerate() {
        for (j, b) in cube.iter().enumerate() {
            expected[i + j] += a * b;
        }
    }
    assert_eq!(coeffs, expected);
    assert_eq!(v["cycle_exponent"], 3);
    assert!(v["check_values"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["equal"] == true));

    let v = json(&run(&["zeta", s(&k4), "--form", "series", "--order", "4"]));
    let c = &v["series"]["coefficients"];
    let pairs: Vec<(i64, i64)> = c
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_i64().unwrap(), p[1].as_i64().unwrap()))
        .collect();
    assert_eq!(pairs, vec![(1, 1), (0, 1), (0, 1), (8, 1), (6, 1)]);

    let v = json(&run(&["zeta", s(&k23), "--form", "euler", "--order", "3"]));
    let pairs: Vec<i64> = v["series"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[0].as_i64().unwrap())
        .collect();
    assert_eq!(pairs, vec![1, 0, 0, 0]);

    let series = json(&run(&[
        "zeta",
        s(&billiard),
        "--form",
        "series",
        "--order",
        "8",
    ]));
    let euler = json(&run(&[
        "zeta",
        s(&billiard),
        "--form",
        "euler",
        "--order",
        "8",
    ]));
    assert_eq!(series["series"], euler["series"]);
}

#[test]
fn zeta_csv_grid() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", K4);
    let o = run(&["zeta", s(&k4), "--output", "csv", "--points", "11"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,zeta,zeta_prime,h");
    assert_eq!(lines.len(), 12);
    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first, vec![0.0, 1.0, 0.0, 1.0]);
}

#[test]
fn euler_guard_refuses_large_orders() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", K4);
    let o = run(&["zeta", s(&k4), "--form", "euler", "--order", "60"]);
    assert_eq!(code(&o), 6);
}

#[test]
fn lambda_routes_agree() {
    let dir = TempDir::new().unwrap();
    let billiard = write(&dir, "b.txt", BILLIARD);
    let v = json(&run(&["lambda", s(&billiard)]));
    let rel = v["relative_difference"].as_f64().unwrap();
    assert!(rel <= 1e-9);
    let l = v["lambda"].as_f64().unwrap();
    assert!(v["lower_bound"].as_f64().unwrap() <= l && l <= v["upper_bound"].as_f64().unwrap());
}

#[test]
fn params_modes() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", K4);
    let billiard = write(&dir, "b.txt", BILLIARD);

    let o = run(&["params", s(&k4), "--mode", "strict"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["strict_window_nonempty"], false);
    assert!(v["x0"].as_f64().unwrap() > 0.0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty"));

    let o = run(&["params", s(&k4)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["mode"], "relaxed");
    assert_eq!(v["a_range"][0].as_f64().unwrap(), 0.0);
    assert_eq!(v["a_range"][1], v["x0"]);
    assert_eq!(v["admissibility"]["all_positive"], true);

    assert_eq!(
        code(&run(&["params", s(&billiard), "--mode", "relaxed"])),
        0
    );
}

#[test]
fn entropy_command() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", K4);
    let one = write(&dir, "one.txt", "1\n");
    let uniform = write(&dir, "u.txt", "0.25 0.25\n0.25 0.25\n");
    let short = write(&dir, "short.txt", "0.5 0.3\n");

    let v = json(&run(&["entropy", s(&k4), s(&one)]));
    assert_eq!(v["value"].as_f64().unwrap(), 0.0);

    let v = json(&run(&["entropy", s(&k4), s(&uniform)]));
    assert!(v["value"].as_f64().unwrap() > 0.0);
    assert_eq!(v["params"]["mode"], "relaxed");
    assert!(v["window"]["x0"].is_number());

    assert_eq!(code(&run(&["entropy", s(&k4), s(&short)])), 4);
    assert_eq!(
        code(&run(&["entropy", s(&k4), s(&short), "--normalize"])),
        0
    );
    assert_eq!(
        code(&run(&["entropy", s(&k4), s(&uniform), "--a", "0.9"])),
        5
    );
    assert_eq!(
        code(&run(&["entropy", s(&k4), s(&uniform), "--sigma", "1.5"])),
        5
    );
    assert_eq!(
        code(&run(&["entropy", s(&k4), s(&uniform), "--mode", "strict"])),
        1
    );
    assert_eq!(code(&run(&["entropy", s(&k4), "/nonexistent/dist"])), 2);
}

#[test]
fn audit_reports_without_failing() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", K4);
    let a = run(&["audit", s(&k4), "--output", "json"]);
    let b = run(&["audit", s(&k4), "--output", "json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let claims = v["claims"].as_array().unwrap();
    let k2 = claims
        .iter()
        .find(|c| c["claim_id"] == "even_trace_at_least_lambda_power_k2")
        .unwrap();
    assert_eq!(k2["holds"], false);
    for c in claims {
        for key in ["claim_id", "paper_location", "lhs", "rhs", "holds", "note"] {
            assert!(c.get(key).is_some(), "{key}");
        }
    }
    let table = run(&["audit", s(&k4)]);
    assert!(String::from_utf8_lossy(&table.stdout).contains("claims hold"));
}

#[test]
fn primes_table_and_json() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", K4);
    let o = run(&["primes", s(&k4), "--max-len", "4"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l == "3\t8\t8"));
    let v = json(&run(&[
        "primes",
        s(&k4),
        "--max-len",
        "3",
        "--output",
        "json",
    ]));
    assert_eq!(v["counts"]["3"], 8);
    assert_eq!(v["primes"].as_array().unwrap().len(), 8);
    assert_eq!(v["counts_match_traces"], true);
}

#[test]
fn billiard_demo() {
    let a = run(&["billiard", "--order", "8"]);
    assert_eq!(code(&a), 0);
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    assert!(text.contains("48x^10 + 32x^8 - 32x^7 - 8x^6 - 32x^5 - 4x^4 - 8x^3 + 3x^2 + 1"));
    assert!(text.contains("zeta series to order 8"));
    assert!(text.trim_end().ends_with("PASS"));
    let b = run(&["billiard", "--order", "8"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&run(&["billiard", "--output", "json"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["reciprocal_zeta"]["matches_reference"], true);
}

#[test]
fn tolerance_sources() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", K4);
    let cfg = write(&dir, "cfg.txt", "# defaults\ntol = 1e-6\norder = 3\n");
    let bad_cfg = write(&dir, "bad.txt", "speed = fast\n");

    let v = json(&run(&[
        "--config",
        s(&cfg),
        "zeta",
        s(&k4),
        "--form",
        "series",
    ]));
    assert_eq!(v["series"]["order"], 3);

    let loose = json(&run(&["--config", s(&cfg), "params", s(&k4)]));
    let tight = json(&run(&["params", s(&k4)]));
    let gap = (loose["x0"].as_f64().unwrap() - tight["x0"].as_f64().unwrap()).abs();
    assert!(gap <= 1e-6);

    let o = bin()
        .env("IHARA_LAB_TOL", "nonsense")
        .args(["params", s(&k4)])
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    // the flag takes precedence over the environment
    let o = bin()
        .env("IHARA_LAB_TOL", "1e-9")
        .args(["--tol", "1e-10", "params", s(&k4)])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);

    assert_eq!(code(&run(&["--config", s(&bad_cfg), "params", s(&k4)])), 3);
    assert_eq!(
        code(&run(&["--config", "/nonexistent/cfg", "params", s(&k4)])),
        2
    );
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&["frobnicate"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["validate", "x", "--output", "csv"])), 3);
}
