use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn lievec(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lievec"));
    cmd.args(args).env_remove("LIEVEC_SEED").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Polynomial sl(3) fields on (x, y).
fn sl3_file(dir: &Path) -> String {
    let exp = lievec(&["realize", "sl", "3"], None);
    let pushed = lievec(&["coords", "-", "--push", "--target", "x,y"], Some(&stdout(&exp)));
    assert_eq!(code(&pushed), 0);
    write(dir, "sl3.dsl", &stdout(&pushed))
}

#[test]
fn realize_pipes_into_table() {
    let r = lievec(&["realize", "sl", "4", "--form", "2"], None);
    assert_eq!(code(&r), 0);
    let t = lievec(&["table", "-"], Some(&stdout(&r)));
    assert_eq!(code(&t), 0);
    let v = json(&t);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["dimension"], 15);
    assert_eq!(v["jacobi"], true);
    assert_eq!(v["basis"].as_array().unwrap().len(), 15);
}

#[test]
fn realize_emits_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sl2.dsl");
    let o = lievec(&["realize", "sl", "2", "--emit", path.to_str().unwrap()], None);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "chart: x\nXa = exp(x)*D[x]\nX-a = exp(-x)*D[x]\n");
}

#[test]
fn invariance_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let sl3 = sl3_file(dir.path());
    let ok = lievec(&["invariance", "--system", "y_2=0", "--fields", &sl3, "--closure"], None);
    assert_eq!(code(&ok), 0);
    let v = json(&ok);
    assert_eq!(v["invariant"], true);
    assert_eq!(v["fields"].as_array().unwrap().len(), 8);

    let bad = lievec(&["invariance", "--system", "y_2=y_1", "--fields", &sl3], None);
    assert_eq!(code(&bad), 1);
    let v = json(&bad);
    assert_eq!(v["invariant"], false);
    let rows = v["fields"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["residuals"].as_array().unwrap().iter().any(|s| s != "0")));
}

#[test]
fn translation_residual_is_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.dsl", "chart: x, y\nB = x*D[y]\n");
    let sys = write(dir.path(), "s.dsl", "y_2 = y_1\n");
    let v = json(&lievec(&["invariance", "--system", &sys, "--fields", &f], None));
    assert_eq!(v["fields"][0]["residuals"][0], "-1");
}

#[test]
fn linearize_exponential_system() {
    let dir = tempfile::tempdir().unwrap();
    let sl4 = write(dir.path(), "sl4.dsl", &stdout(&lievec(&["realize", "sl", "4"], None)));
    let map = lievec(&["coords", &sl4], None);
    assert_eq!(code(&map), 0);
    assert!(stdout(&map).contains("u = -exp(-x-y-z)\nv = -exp(-y-z)\nw = -exp(-z)\n"));
    let map = write(dir.path(), "map.dsl", &stdout(&map));
    let sys = lievec(&["transform", "--system", "independent: u; v_2 = 0; w_2 = 0", "--map", &map, "--inverse"], None);
    assert_eq!(stdout(&sys), "y_2 = -y_1^2 - y_1\nz_2 = -2*y_1*z_1 - z_1^2 - z_1\n");
    let sys = write(dir.path(), "sys.dsl", &stdout(&sys));
    let report = dir.path().join("out.json");
    let o = lievec(
        &[
            "linearize",
            "--system",
            &sys,
            "--fields",
            &sl4,
            "--chain",
            "Xabc,Xbc,Xc",
            "--report",
            report.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "linearized: v_2 = 0; w_2 = 0\n");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["verdict"], "linearized");
    assert_eq!(v["transformed"], serde_json::json!(["v_2 = 0", "w_2 = 0"]));
    assert_eq!(v["map"]["inverse"][2], "exp(z) = -1/w");
    let stages: Vec<&str> = v["stages"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(stages, ["symmetry", "coordinates", "transform", "verdict"]);
}

#[test]
fn linearize_reports_failed_stage() {
    let dir = tempfile::tempdir().unwrap();
    let sl4 = write(dir.path(), "sl4.dsl", &stdout(&lievec(&["realize", "sl", "4"], None)));
    let o = lievec(&["linearize", "--system", "y_2 = 0; z_2 = 0", "--fields", &sl4], None);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["verdict"], "failed");
    assert_eq!(v["stages"][0]["ok"], false);
    assert!(v["map"].is_null());
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let sl4 = write(dir.path(), "sl4.dsl", &stdout(&lievec(&["realize", "sl", "4"], None)));
    let cases: Vec<Vec<&str>> = vec![
        vec!["fmt", "/nonexistent/file.dsl"],
        vec!["linearize", "--system", "y_2 = 0; z_2 = 0", "--fields", &sl4, "--chain", "Xq"],
        vec!["realize", "sl", "1"],
        vec!["table", &sl4, "--frobnicate"],
        vec!["invariance", "--system", "y_2 = 0", "--fields", &sl4],
    ];
    for args in cases {
        let o = lievec(&args, None);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = lievec(&["fmt", "-"], Some("A = x*D[y] +"));
    assert_eq!(code(&o), 2);
    let o = lievec(&["table", "-", "--max-dim", "2"], Some("chart: x\nA = D[x]\nB = x^2*D[x]\n"));
    assert_eq!(code(&o), 1);
}

#[test]
fn fmt_and_bracket() {
    let o = lievec(&["fmt", "-"], Some("A = (x+1)*D[x] - 1*D[y]\n"));
    assert_eq!(stdout(&o), "chart: x, y\nA = (x + 1)*D[x] - D[y]\n");
    let o = lievec(&["fmt", "-", "--kind", "expr"], Some("(x^2 - 1)/(x - 1)"));
    assert_eq!(stdout(&o), "x + 1\n");
    let o = lievec(&["fmt", "-", "--kind", "system"], Some("y_2 = y_1*y_1"));
    assert_eq!(stdout(&o), "y_2 = y_1^2\n");
    let o = lievec(&["bracket", "-", "A", "B"], Some("chart: x, y\nA = D[x]\nB = x*D[y]\n"));
    assert_eq!(stdout(&o), "[A,B] = D[y]\n");
}

#[test]
fn prolong_and_transform() {
    let o = lievec(&["prolong", "-"], Some("chart: x, y\nB = x*D[y]\nY = y*D[x]\n"));
    assert_eq!(
        stdout(&o),
        "chart: x, y, y_1, y_2\nB = x*D[y] + D[y_1]\nY = y*D[x] - y_1^2*D[y_1] - 3*y_1*y_2*D[y_2]\n"
    );
    let dir = tempfile::tempdir().unwrap();
    let swap = write(dir.path(), "swap.dsl", "source: x, y\ntarget: s, t\ns = y\nt = x\n");
    let o = lievec(&["transform", "--system", "y_2 = y_1^3", "--map", &swap], None);
    assert_eq!(stdout(&o), "independent: s\nt_2 = -1\n");
}

#[test]
fn roots_and_chains() {
    let r = lievec(&["realize", "sl", "4"], None);
    let v = json(&lievec(&["roots", "-"], Some(&stdout(&r))));
    assert_eq!(v["type_a"], true);
    assert_eq!(v["positive_roots"], 6);
    assert_eq!(v["cartan_matrix"], serde_json::json!([[2, -1, 0], [-1, 2, -1], [0, -1, 2]]));

    let v = json(&lievec(&["chain", "-"], Some(&stdout(&r))));
    let names: Vec<&str> = v["chain"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["Xabc", "Xbc", "Xc"]);

    let r = lievec(&["realize", "sl", "3", "--form", "2"], None);
    let o = lievec(&["coords", "-"], Some(&stdout(&r)));
    assert!(stdout(&o).contains("u = -exp(-x)\nv = -exp(-x-y)\n"), "{}", stdout(&o));

    let v = json(&lievec(&["rank", "-", "--names", "Xa,X-a"], Some(&stdout(&r))));
    assert_eq!(v["rank"], 2);
    assert_eq!(v["full"], true);
}

#[test]
fn reports_are_deterministic_and_seeded() {
    let r = stdout(&lievec(&["realize", "sl", "3"], None));
    let a = lievec(&["table", "-"], Some(&r));
    let b = lievec(&["table", "-"], Some(&r));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 0x5eed_1ec5u64);
    let c = Command::new(env!("CARGO_BIN_EXE_lievec"))
        .args(["rank", "-"])
        .env("LIEVEC_SEED", "7")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut ch| {
            ch.stdin.take().unwrap().write_all(r.as_bytes())?;
            ch.wait_with_output()
        })
        .unwrap();
    assert_eq!(json(&c)["seed"], 7);
    let d = lievec(&["--seed", "0x10", "rank", "-"], Some(&r));
    assert_eq!(json(&d)["seed"], 16);
}
