use std::process::Command;

use ellk3_stab::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("ellk3-stab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["region", "classify", "--dalpha", "-1", "--d", "2", "--v", "2"]).0, 0);
    assert_eq!(call(&["--help"]).0, 0);
    let (code, _, err) = call(&["region", "tangency", "--dalpha", "0"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    assert_eq!(call(&["region", "classify", "--dalpha", "1/0", "--d", "2", "--v", "2"]).0, 3);
    assert_eq!(call(&["verify", "--suite", "nonsense"]).0, 3);
    assert_eq!(call(&["no-such-command"]).0, 3);
    assert_eq!(call(&["wall", "quadric", "--chern-e", "1,2,3"]).0, 3);
    assert_eq!(call(&["region", "raster", "--window", "1,1,1,2"]).0, 2);
}

#[test]
fn json_outputs() {
    let v = json(&["region", "classify", "--dalpha", "-1", "--d", "2", "--v", "2"]);
    assert_eq!(v["twisted_ample"], true);
    assert_eq!(v["provenance"], "small_negative_alpha");

    let v = json(&["cce", "solve", "--domega", "1", "--vomega", "2", "--b", "1/2,1/3"]);
    assert_eq!(v["d_omega_prime"], "5/2");
    assert_eq!(v["b_prime"]["fiber"], "-61/42");

    let v = json(&["fmt", "apply", "--map", "phi", "--chern", "1,0,0,0"]);
    assert_eq!((v["n"].as_str(), v["theta"].as_str(), v["ch2"].as_str()), (Some("0"), Some("-1"), Some("1")));

    let v = json(&["wall", "slice", "--chern-e", "1,1,0,-1", "--z", "2"]);
    assert_eq!(v["circle"]["center_y"], "-2");
    assert_eq!(v["circle"]["radius_sq"], "8");

    let v = json(&["wall", "ray", "--H", "1,4", "--target", "1,1,1,0", "--candidates", "1,0,1,1"]);
    assert_eq!(v[0]["t_root"], "3/2");

    let v = json(&["wall", "certify", "--spec", "vd:2,2", "--alpha", "-1"]);
    assert_eq!(v["verdict"], "no_numerical_wall");
}

#[test]
fn svg_is_byte_identical_across_thread_counts() {
    let bin = env!("CARGO_BIN_EXE_ellk3-stab");
    let render = |threads: &str| {
        let out = Command::new(bin)
            .args(["region", "raster", "--dalpha", "-2", "--window", "1/10,1/10,5,5", "--nx", "60", "--ny", "40", "--format", "svg"])
            .env("ELLK3_STAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let one = render("1");
    assert!(one.starts_with(b"<svg") || one.starts_with(b"<?xml"));
    assert_eq!(one, render("4"));
    assert_eq!(one, render("1"));
}

#[test]
fn raster_to_file() {
    let dir = std::env::temp_dir().join(format!("ellk3-stab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.csv");
    let p = path.to_str().unwrap();
    let (code, _, err) = call(&["region", "raster", "--window", "0,0,3,3", "--nx", "4", "--ny", "3", "--format", "csv", "--out", p]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 13);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_suites() {
    let (code, out, _) = call(&["verify", "--suite", "all", "--format", "csv"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 15);
    let v = json(&["verify", "--suite", "regions"]);
    let ids: Vec<u64> = v.as_array().unwrap().iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, vec![10, 11, 15]);
    // A tolerance no float residual can meet fails the residual check only.
    let (code, out, _) = call(&["verify", "--suite", "cce", "--tol", "1e-300", "--format", "csv"]);
    assert_eq!(code, 2);
    assert!(out.lines().any(|l| l.starts_with("FAIL [ 5]")), "{out}");
}
