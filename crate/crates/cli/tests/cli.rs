use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use reachlab::{ProbeReport, Verdict};
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_reachlab"));
    c.env_remove("REACHLAB_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

struct Fixture {
    dir: TempDir,
    circle: String,
    sphere: String,
    poles: String,
    east: String,
    dgm: String,
}

fn fixture() -> Fixture {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    Fixture {
        circle: write(d, "circle.json", r#"{"kind": "circle", "radius": 1}"#),
        sphere: write(d, "sphere.json", r#"{"kind": "sphere2", "radius": 1}"#),
        poles: write(
            d,
            "poles.json",
            r#"{"atoms": [{"point": [0, 0, 1], "weight": 0.5}, {"point": [0, 0, -1], "weight": 0.5}]}"#,
        ),
        east: write(d, "east.json", r#"{"atoms": [{"point": [1, 0, 0], "weight": 1}]}"#),
        dgm: write(d, "a.json", r#"{"points": [[0, 1], [0.5, 2], [1, 1.25]]}"#),
        dir,
    }
}

#[test]
fn distance_on_sphere() {
    let f = fixture();
    let o = run(&["distance", "--space", &f.sphere, "--mu", &f.poles, "--nu", &f.east, "--p", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = stdout_json(&o);
    assert!((v["value"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() <= 1e-12);
}

#[test]
fn distance_csv() {
    let f = fixture();
    let o = run(&["distance", "--space", &f.sphere, "--mu", &f.poles, "--nu", &f.poles, "--p", "1", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "p,value\n1,0\n");
}

#[test]
fn barycenters_of_antipodal_poles() {
    let f = fixture();
    let o = run(&["barycenter", "--space", &f.sphere, "--mu", &f.poles, "--p", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout_json(&o)["multiplicity"].as_u64().unwrap() >= 2);
}

#[test]
fn orlicz_power_gauge_matches_wasserstein() {
    let f = fixture();
    let o = run(&["orlicz", "--space", &f.sphere, "--mu", &f.poles, "--x", "[1, 0, 0]", "--gauge", "power:2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!((stdout_json(&o)["value"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() <= 1e-9);
}

#[test]
fn bottleneck_to_itself_is_zero() {
    let f = fixture();
    let o = run(&["dgm-bottleneck", "--d1", &f.dgm, "--d2", &f.dgm]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout_json(&o)["value"].as_f64(), Some(0.0));
    let o = run(&["dgm-bottleneck", "--d1", &f.dgm, "--d2", &f.dgm, "--p", "2"]);
    assert_eq!(stdout_json(&o)["value"].as_f64(), Some(0.0));
}

#[test]
fn embedding_is_isometric_through_the_cli() {
    let f = fixture();
    let emb = write(f.dir.path(), "emb.json", r#"{"landmarks": [0, 1.5, 3, 4.5]}"#);
    let dgm = |x: &str| {
        let out = f.dir.path().join(format!("d{x}.json"));
        let o = run(&["dgm-embed", "--space", &f.circle, "--embedding", &emb, "--x", x, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        out
    };
    let (a, b) = (dgm("0.25"), dgm("1.0"));
    let o = run(&["dgm-bottleneck", "--d1", a.to_str().unwrap(), "--d2", b.to_str().unwrap()]);
    assert!((stdout_json(&o)["value"].as_f64().unwrap() - 0.75).abs() <= 1e-12);
}

#[test]
fn probe_reports_round_trip() {
    let f = fixture();
    let o = run(&["probe", "--name", "w1-null-reach", "--space", &f.circle, "--x", "0", "--eps", "0.1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: ProbeReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.verdict, Verdict::Confirmed);
    let text = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(text.as_bytes(), &o.stdout[..]);

    // the attached spec reruns to the same bytes
    let spec = write(f.dir.path(), "spec.json", &serde_json::to_string(&report.spec).unwrap());
    let again = run(&["probe", "--spec", &spec]);
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn malformed_json_exits_2_with_position() {
    let f = fixture();
    let bad = write(f.dir.path(), "bad.json", "{\"atoms\": [\n  {\"point\": [0, 0, 1], \"weight\": 1},\n");
    let o = run(&["distance", "--space", &f.sphere, "--mu", &bad, "--nu", &f.east, "--p", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3 column 0"), "{}", stderr(&o));
    let o = run(&["distance", "--space", "/nonexistent/space.json", "--mu", &f.east, "--nu", &f.east, "--p", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1_naming_the_invariant() {
    let f = fixture();
    let o = run(&["distance", "--space", &f.sphere, "--mu", &f.poles, "--nu", &f.east, "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("`p`"), "{}", stderr(&o));
    let off = write(f.dir.path(), "off.json", r#"{"atoms": [{"point": [0, 0, 0], "weight": 1}]}"#);
    let o = run(&["distance", "--space", &f.sphere, "--mu", &off, "--nu", &f.east, "--p", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let neg = write(f.dir.path(), "neg.json", r#"{"kind": "circle", "radius": -1}"#);
    let o = run(&["probe", "--name", "w1-null-reach", "--space", &neg, "--x", "0", "--eps", "0.1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn violated_verdict_exits_3() {
    let f = fixture();
    let o = run(&["probe", "--name", "convexity", "--space", &f.sphere, "--p", "2", "--n-triples", "2000"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let report: ProbeReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.verdict, Verdict::Violated);
}

fn suite(dir: &Path, jobs: &str, seed_env: Option<&str>) -> (PathBuf, Output) {
    let out = dir.join(format!("suite-{jobs}-{}", seed_env.unwrap_or("default")));
    let mut c = bin();
    c.args(["probe-suite", "--out-dir", out.to_str().unwrap(), "--jobs", jobs]);
    if let Some(s) = seed_env {
        c.env("REACHLAB_SEED", s);
    }
    (out.clone(), c.output().unwrap())
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn probe_suite_is_deterministic_across_worker_counts() {
    let tmp = TempDir::new().unwrap();
    let (a, oa) = suite(tmp.path(), "1", None);
    let (b, ob) = suite(tmp.path(), "3", None);
    // the sphere convexity probe records violations
    assert_eq!(oa.status.code(), Some(3), "{}", stderr(&oa));
    assert_eq!(ob.status.code(), Some(3));
    let (fa, fb) = (files(&a), files(&b));
    assert_eq!(fa, fb);
    assert_eq!(fa.len(), 19);

    let csv = String::from_utf8(fs::read(a.join("summary.csv")).unwrap()).unwrap();
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let verdicts: Vec<String> = rdr.records().map(|r| r.unwrap()[4].to_string()).collect();
    assert_eq!(verdicts.len(), 18);
    assert_eq!(verdicts.iter().filter(|v| *v == "violated").count(), 1);
    assert!(verdicts.iter().all(|v| v == "confirmed" || v == "violated"));

    for (name, bytes) in &fa {
        if name.ends_with(".json") {
            let r: ProbeReport = serde_json::from_slice(bytes).unwrap();
            assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", String::from_utf8_lossy(bytes));
        }
    }
}

#[test]
fn seed_env_overrides_default() {
    let tmp = TempDir::new().unwrap();
    let f = fixture();
    let plane = write(f.dir.path(), "plane.json", r#"{"kind": "euclidean", "dim": 2}"#);
    let args = ["probe", "--name", "unique-barycenters", "--space", plane.as_str(), "--p", "2", "--n-measures", "5"];
    let seed_of = |o: &Output| stdout_json(o)["spec"]["seed"].as_u64().unwrap();
    let default = run(&args);
    let with_env = bin().args(args).env("REACHLAB_SEED", "42").output().unwrap();
    assert_eq!(seed_of(&with_env), 42);
    assert_ne!(seed_of(&default), 42);
    let explicit = bin().args(args).args(["--seed", "7"]).env("REACHLAB_SEED", "42").output().unwrap();
    assert_eq!(seed_of(&explicit), 7);
    let bad = bin().args(args).env("REACHLAB_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    drop(tmp);
}
