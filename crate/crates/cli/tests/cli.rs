use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn zap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zap")).args(args).env_remove("ZAP_PRECISION").output().unwrap()
}

fn workdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("zap-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scan(out: &Path, t1: &str, extra: &[&str]) -> Output {
    let mut args = vec!["scan", "--k", "1", "--a", "1,0", "--t0", "1", "--t1", t1, "--out", s(out)];
    args.extend_from_slice(extra);
    zap(&args)
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(zap(&[]).status.code(), Some(2));
    assert_eq!(zap(&["coeffs", "--k", "1"]).status.code(), Some(2));
    assert_eq!(zap(&["scan", "--k", "1", "--a", "1,0", "--t0", "1"]).status.code(), Some(2));
    assert_eq!(zap(&["coeffs", "--k", "1", "--a", "1"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_zap"))
        .args(["coeffs", "--k", "1", "--a", "1,0", "--max", "3"])
        .env("ZAP_PRECISION", "quad")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coeffs_csv() {
    let o = zap(&["coeffs", "--k", "1", "--a", "1,0", "--max", "5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "index,alpha_re,alpha_im");
    assert_eq!(lines.len(), 5);
    let ln2 = 2f64.ln();
    let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((v + ln2 * ln2).abs() < 1e-15);
    // Prime index: single factorization.
    let v3: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((v3 + 3f64.ln().powi(2)).abs() < 1e-14);

    let o = zap(&["coeffs", "--k", "1", "--a", "-1,0", "--x", "3"]);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("3,1.2069489608125821e0,"));
    let o = zap(&["coeffs", "--k", "1", "--a", "0,0", "--x", "1.5"]);
    assert!(stdout(&o).contains("3/2,-6.42646991702290"));
    assert_eq!(zap(&["coeffs", "--k", "1", "--a", "1,0", "--x", "0.3"]).status.code(), Some(1));
}

#[test]
fn scan_is_deterministic_and_resumable() {
    let d = workdir("scan");
    let (one, many, resumed) = (d.join("one.jsonl"), d.join("many.jsonl"), d.join("resumed.jsonl"));
    assert!(scan(&one, "120", &["--jobs", "1"]).status.success());
    assert!(scan(&many, "120", &["--jobs", "4"]).status.success());
    assert!(scan(&resumed, "120", &["--jobs", "2", "--max-windows", "4"]).status.success());
    let o = scan(&resumed, "120", &["--jobs", "3"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("resuming"));

    let reference = fs::read(&one).unwrap();
    assert!(!reference.is_empty());
    assert_eq!(reference, fs::read(&many).unwrap());
    assert_eq!(reference, fs::read(&resumed).unwrap());

    // Completed run: a re-run does not touch the file.
    let o = scan(&one, "120", &["--jobs", "2"]);
    assert!(stderr(&o).contains("0 windows processed"));
    assert_eq!(reference, fs::read(&one).unwrap());

    let o = zap(&["scan", "--k", "1", "--a", "2,0", "--t0", "1", "--t1", "120", "--out", s(&one)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("does not match"));
    let _ = fs::remove_dir_all(&d);
}

#[test]
fn empty_grid_gives_empty_file_and_manifest() {
    let d = workdir("empty");
    let out = d.join("p.jsonl");
    let o = zap(&["scan", "--k", "1", "--a", "1,0", "--t0", "50", "--t1", "50", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read(&out).unwrap().len(), 0);
    let manifest = fs::read_to_string(d.join("p.jsonl.manifest.json")).unwrap();
    let m: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(m["schema_version"], 1);
    assert_eq!(m["finalized"], true);
    assert_eq!(m["points_len"], 0);
    let _ = fs::remove_dir_all(&d);
}

#[test]
fn reports_and_checksum() {
    let d = workdir("reports");
    let out = d.join("p.jsonl");
    assert!(scan(&out, "210", &["--jobs", "2"]).status.success());

    let svg = d.join("h.svg");
    let o = zap(&["census", "--points", s(&out), "--t", "100", "--u", "100", "--svg", s(&svg)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("schema_version,k,a_re,a_im,t,u,halfwidth,n1,n2,n3,total"));
    let cols: Vec<&str> = lines[1].split(',').collect();
    let n: Vec<u64> = cols[7..11].iter().map(|v| v.parse().unwrap()).collect();
    assert_eq!(n[0] + n[1] + n[2], n[3]);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    for args in [
        vec!["count", "--t", "100,200"],
        vec!["expsum", "--x", "2", "--t", "200"],
        vec!["littlewood", "--t", "100", "--u", "50"],
        vec!["betasum", "--t", "100", "--u", "100"],
    ] {
        let mut full = args.clone();
        full.extend(["--points", s(&out)]);
        let o = zap(&full);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).starts_with("schema_version,"));
    }
    let o = zap(&["count", "--points", s(&out), "--t", "500"]);
    assert_eq!(o.status.code(), Some(1));

    // Flip one byte in the middle of the file.
    let mut bytes = fs::read(&out).unwrap();
    let i = bytes.iter().position(|&b| b == b'7').unwrap();
    bytes[i] = b'8';
    fs::write(&out, bytes).unwrap();
    let o = zap(&["census", "--points", s(&out), "--t", "100", "--u", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("checksum"));
    let _ = fs::remove_dir_all(&d);
}

#[test]
fn regions_and_trivial_tables() {
    let o = zap(&["regions", "--k", "1", "--a", "1,0", "--trivial", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].ends_with(",n_min"));
    assert!(lines[1].ends_with(",8"));
    assert_eq!(lines[3], "n,beta,gamma,winding,newton_residual,abs_residual");
    assert!(lines[4].starts_with("8,") && lines[5].starts_with("9,"));

    let o = zap(&["trivial", "--k", "1", "--a", "0,0"]);
    assert!(o.status.success());
    let rows = stdout(&o);
    assert_eq!(rows.lines().count(), 22);
    assert!(rows.lines().skip(1).all(|l| l.split(',').nth(3) == Some("1")));
    assert_eq!(zap(&["trivial", "--k", "1", "--a", "0,0", "--n0", "3", "--n1", "3"]).status.code(), Some(1));
}
