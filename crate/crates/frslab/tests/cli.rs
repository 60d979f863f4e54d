use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frslab")).args(args).output().expect("spawn frslab")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> Option<i32> {
    run(args).status.code()
}

#[test]
fn count_rows() {
    let cone = corpus("cone.toml");
    let out = ok(&["count", &cone, "--p", "3", "--n", "2", "--no-cache"]);
    assert_eq!(out, "scheme,p,r,n,count,h_num,h_den,method,seconds\ncone,3,1,2,99,11,9,lifted,NA\n");
    let out = ok(&["count", &cone, "--p", "3", "--n", "1", "--no-cache"]);
    assert_eq!(out, "scheme,p,r,n,count,h_num,h_den,method,seconds\ncone,3,1,1,9,1,1,lifted,NA\n");
    let a1 = corpus("A1.toml");
    assert!(ok(&["count", &a1, "--p", "2", "--n", "3", "--no-cache"]).contains("\nA1,2,1,3,8,1,1,lifted,NA\n"));
    assert!(ok(&["count", &a1, "--p", "2", "--n", "3", "--naive", "--no-cache"]).contains(",8,1,1,naive,NA\n"));
    let gr = ok(&["count", &cone, "--p", "2", "--r", "2", "--n", "2", "--no-cache"]);
    assert!(gr.starts_with("scheme,") && gr.contains("cone,2,2,2,"));
}

#[test]
fn count_output_is_deterministic() {
    let cusp = corpus("cusp.toml");
    let args = ["count", cusp.as_str(), "--p", "5", "--n", "4", "--no-cache"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn exit_codes() {
    let a1 = corpus("A1.toml");
    assert_eq!(code(&["count", &a1, "--p", "4", "--n", "2", "--no-cache"]), Some(2));
    assert_eq!(code(&["count", "/nonexistent.toml", "--p", "3", "--n", "2"]), Some(2));
    assert_eq!(code(&["count", &a1, "--p", "3"]), Some(2));
    assert_eq!(code(&["count", &corpus("square.map.toml"), "--p", "3", "--n", "1"]), Some(2));
    let cone = corpus("cone.toml");
    assert_eq!(code(&["count", &cone, "--p", "5", "--n", "3", "--naive", "--naive-cap", "100", "--no-cache"]), Some(4));
    assert_eq!(code(&["construct", &cone, "patch"]), Some(3));
    assert_eq!(code(&["construct", &cone, "hat"]), Some(2));
}

#[test]
fn hseq_tables() {
    let out = ok(&["hseq", &corpus("node.toml"), "--p", "3", "--nmax", "4", "--no-cache"]);
    let h: Vec<String> = out.lines().skip(1).map(|l| {
        let f: Vec<&str> = l.split(',').collect();
        format!("{}/{}", f[5], f[6])
    }).collect();
    assert_eq!(h, ["5/3", "7/3", "3/1", "11/3"]);
    let a2 = ok(&["hseq", &corpus("A2.toml"), "--p", "7", "--nmax", "3", "--no-cache"]);
    assert!(a2.lines().skip(1).all(|l| l.ends_with(",1,1,lifted")));
    let cusp = ok(&["hseq", &corpus("cusp.toml"), "--p", "5", "--nmax", "6", "--no-cache"]);
    let hs: Vec<f64> = cusp
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            f[5].parse::<f64>().unwrap() / f[6].parse::<f64>().unwrap()
        })
        .collect();
    assert_eq!(hs.len(), 6);
    assert!(hs[..5].iter().all(|&h| h < hs[5]));
}

#[test]
fn hseq_marks_limits() {
    let out = run(&[
        "hseq",
        &corpus("cone.toml"),
        "--p",
        "5",
        "--nmax",
        "4",
        "--node-budget",
        "3",
        "--naive-cap",
        "200",
        "--no-cache",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().last().unwrap().ends_with("LIMIT,LIMIT,LIMIT,LIMIT"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn cache_is_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().display().to_string();
    let cone = corpus("cone.toml");
    let first = ok(&["count", &cone, "--p", "3", "--n", "3", "--cache", &d]);
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let name = files[0].as_ref().unwrap().file_name().into_string().unwrap();
    assert!(name.ends_with(".p3.r1.n3"));
    assert_eq!(ok(&["count", &cone, "--p", "3", "--n", "3", "--cache", &d]), first);
    let env = Command::new(env!("CARGO_BIN_EXE_frslab"))
        .args(["count", &cone, "--p", "3", "--n", "2"])
        .env("FRSLAB_CACHE", &d)
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn classify_reports() {
    let cone = ok(&["classify", &corpus("cone.toml")]);
    assert!(cone.contains("**Verdict: bounded-at-scale**, consistent with rational singularities"));
    assert!(cone.contains("irreducibility assumed") && cone.contains("finite-grid verdicts"));
    let x2 = ok(&["classify", &corpus("double-point.toml"), "--format", "csv"]);
    assert!(x2.contains("overall,,,growth-detected,\"inconsistent with condition iv'), hence with rational singularities\""));
    let e = ok(&["classify", &corpus("elliptic.toml"), "--primes", "3,5,7", "--nmax", "5"]);
    assert!(e.contains("## Smooth stability") && e.contains("Exceptional primes: {}"));
    assert_eq!(code(&["classify", &corpus("cone.toml"), "--nmax", "3"]), Some(2));
    assert_eq!(code(&["classify", &corpus("cone.toml"), "--tau", "x"]), Some(2));
}

#[test]
fn construct_outputs() {
    let scaled = ok(&["construct", &corpus("x2-minus-2.toml"), "scale", "2"]);
    assert!(scaled.contains("generators = [\"x^2 - 8\"]"));
    let hat = ok(&["construct", &corpus("hat-base.toml"), "hat"]);
    assert!(hat.contains("generators = [\"x^2 - y\"]"));
    assert!(hat.contains("components = [\"2*x\", \"2*y\"]"));
    let patch = ok(&["construct", &corpus("A1-two-charts.toml"), "patch"]);
    assert!(patch.contains("N_bound = 2"));
    assert_eq!(patch.matches("# file: ").count(), 2);
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().display().to_string();
    ok(&["construct", &corpus("A1-two-charts.toml"), "patch", "--P", "3", "--out", &d]);
    let mut names: Vec<String> =
        std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["A1-two-charts-patch-1.toml", "A1-two-charts-patch-2.toml"]);
    let back = ok(&["count", &dir.path().join(&names[0]).display().to_string(), "--p", "5", "--n", "2", "--no-cache"]);
    assert!(back.contains("A1-two-charts-patch-1,5,1,2,"));
}

#[test]
fn measure_tables() {
    let sq = corpus("square.map.toml");
    let ratio = ok(&["measure", "ratio", "--map", &sq, "--family", "counterexample", "--p", "3", "--nmax", "3"]);
    let rows: Vec<&str> = ratio.lines().collect();
    assert_eq!(rows[0], "n,mass,haar,ratio,note");
    assert!(rows[1].ends_with(",degenerate"));
    assert!(rows[2].starts_with("2,") && rows[2].contains(",81/2,"));
    assert!(rows[3].starts_with("3,") && rows[3].contains(",19683/730,"));
    let ecc = ok(&["measure", "eccentricity", "--family", "balls", "--p", "5", "--nmax", "4", "--dim", "2"]);
    assert!(ecc.lines().skip(1).all(|l| l.ends_with(",1")));
    let id = corpus("identity2.map.toml");
    let push = ok(&["measure", "pushforward", "--map", &id, "--family", &corpus("two-balls.balls"), "--p", "3"]);
    for l in push.lines().skip(1) {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f[1], f[2]);
    }
    assert_eq!(code(&["measure", "ratio", "--family", "balls", "--p", "3"]), Some(2));
}
