use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

const DISC: &str = r#"{"geometry":"euclidean","dim":2,"kind":"ball","center":[0,0],"radius":1}"#;
const HYPERBOLIC_BALL: &str = r#"{"geometry":"hyperbolic","dim":2,"kind":"ball","center":[0,0,1],"radius":1}"#;
const SQUARE: &str = r#"{"geometry":"euclidean","dim":2,"kind":"polytope","halfspaces":[
  {"normal":[-1,0],"offset":-0.3},{"normal":[1,0],"offset":-0.3},
  {"normal":[0,-1],"offset":-0.3},{"normal":[0,1],"offset":-0.3}],"interior_point":[0,0]}"#;

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn funkgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_funkgeo")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> &str {
    std::str::from_utf8(&o.stdout).unwrap().trim()
}

#[test]
fn unit_disc_distances() {
    let dir = TempDir::new().unwrap();
    let disc = write(&dir, "disc.json", DISC);
    let disc = disc.to_str().unwrap();
    for (metric, expected) in [("funk", "0.693147180560"), ("rfunk", "0.405465108108"), ("hilbert", "0.549306144334")] {
        let o = funkgeo(&["dist", disc, "0,0", "0.5,0", "--metric", metric]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), expected, "{metric}");
    }
    let o = funkgeo(&["dist", disc, "0.2,0.1", "0.2,0.1"]);
    assert_eq!(stdout(&o), "0.000000000000");
}

#[test]
fn finsler_norm_at_ball_center() {
    let dir = TempDir::new().unwrap();
    let ball = write(&dir, "h.json", HYPERBOLIC_BALL);
    let o = funkgeo(&["norm", ball.to_str().unwrap(), "0,0,1", "--xi", "1,0"]);
    assert_eq!(o.status.code(), Some(0));
    let value: f64 = stdout(&o).parse().unwrap();
    assert!((value - 1.0 / 1f64.tanh()).abs() < 1e-11);
}

#[test]
fn indicatrix_of_unit_disc_is_the_unit_circle() {
    let dir = TempDir::new().unwrap();
    let disc = write(&dir, "disc.json", DISC);
    let o = funkgeo(&["norm", disc.to_str().unwrap(), "0,0", "--indicatrix", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<&str> = stdout(&o).lines().filter(|l| !l.starts_with("theta")).collect();
    assert_eq!(rows.len(), 16);
    for row in rows {
        let v: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert!((v[1].hypot(v[2]) - 1.0).abs() < 1e-11, "{row}");
    }
}

#[test]
fn project_round_trips() {
    let dir = TempDir::new().unwrap();
    let square = write(&dir, "sq.json", SQUARE);
    for target in ["spherical", "hyperbolic"] {
        let o = funkgeo(&["project", "--body", square.to_str().unwrap(), "--target", target, "--verify"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let lifted: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(lifted["geometry"], target);
    }
    let o = funkgeo(&["project", "--point", "0,0", "--target", "hyperbolic"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["points"][0], serde_json::json!([0.0, 0.0, 1.0]));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let disc = write(&dir, "disc.json", DISC);
    let disc = disc.to_str().unwrap();
    let bad = write(&dir, "bad.json", "{bad");
    let big = write(&dir, "big.json", &SQUARE.replace("-0.3", "-3"));

    assert_eq!(funkgeo(&["dist", bad.to_str().unwrap(), "0,0", "0.1,0"]).status.code(), Some(2));
    assert_eq!(funkgeo(&["dist", disc, "0,0", "0.1"]).status.code(), Some(2));
    assert_eq!(funkgeo(&["dist", disc, "0,0", "2,0"]).status.code(), Some(3));
    assert_eq!(funkgeo(&["dist", disc, "0,0"]).status.code(), Some(2));
    assert_eq!(
        funkgeo(&["project", "--body", big.to_str().unwrap(), "--target", "hyperbolic"]).status.code(),
        Some(2)
    );
}

#[test]
fn check_is_deterministic() {
    let a = funkgeo(&["check", "trig", "--seed", "3", "--samples", "50"]);
    let b = funkgeo(&["check", "trig", "--seed", "3", "--samples", "50", "--jobs", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("pass"));
}
