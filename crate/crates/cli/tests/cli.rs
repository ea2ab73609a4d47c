use std::path::PathBuf;
use std::process::{Command, Output};

use birkhoff_cli::{run, RunConfig, Verb};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_birkhoff")).args(args).env_remove("BIRKHOFF_THREADS").output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("birkhoff-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn bare_invocation_lists_verbs() {
    let out = bin(&[]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    for v in Verb::ALL {
        assert!(err.contains(v.name()), "{}", v.name());
    }
    assert!(err.contains("Usage"));
}

#[test]
fn help_documents_flags() {
    let out = bin(&["verify", "equivalence", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("--nmax") && s.contains("--threads") && s.contains("--format"));
}

#[test]
fn unknown_verb_suggests() {
    let out = bin(&["verify", "equivalance"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("equivalence"));
}

#[test]
fn bad_bounds_and_order() {
    assert_eq!(bin(&["verify", "closure", "--jmax", "0"]).status.code(), Some(1));
    assert_eq!(bin(&["verify", "closure", "--order", "3"]).status.code(), Some(1));
    assert_eq!(bin(&["derive", "dkp", "--level", "3"]).status.code(), Some(1));
}

#[test]
fn closure_example() {
    let out = bin(&["verify", "closure", "--stratum", "big-cell", "--jmax", "4", "--kmax", "4", "--mmax", "4", "--order", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verb"], "verify closure");
    assert_eq!(v["items_total"], 64);
    assert_eq!(v["items_zero"], 64);
    assert_eq!(v["bounds"]["order"], "12");
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn dkp_latex() {
    let out = bin(&["derive", "dkp", "--level", "1", "--format", "latex"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert_eq!(s.lines().filter(|l| l.ends_with("= 0")).count(), 2);
    assert!(s.contains(r"\frac{\partial u_{1}}{\partial x_{3}}"));
}

#[test]
fn small_equivalence() {
    let out = bin(&["verify", "equivalence", "--nmax", "2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("checked items zero"));
}

#[test]
fn nonzero_residual_exits_two() {
    let out = bin(&["derive", "dkp", "--level", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["failures"].as_array().unwrap().len(), 1);
}

#[test]
fn output_file_and_unwritable_path() {
    let path = scratch("h.json");
    let out = bin(&["verify", "h-symmetry", "--nmax", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["items_total"], 3);
    let bad = scratch("missing-dir").join("x").join("r.json");
    assert_eq!(bin(&["verify", "h-symmetry", "--out", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn thread_env_overrides_and_keeps_output() {
    let base = bin(&["verify", "jacobi", "--nmax", "3", "--threads", "4"]);
    let env = Command::new(env!("CARGO_BIN_EXE_birkhoff"))
        .args(["verify", "jacobi", "--nmax", "3", "--threads", "4"])
        .env("BIRKHOFF_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(json(&base)["digest"], json(&env)["digest"]);
    let bad = Command::new(env!("CARGO_BIN_EXE_birkhoff")).args(["verify", "jacobi"]).env("BIRKHOFF_THREADS", "0").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn sigma12_stub() {
    assert_eq!(bin(&["verify", "sigma12"]).status.code(), Some(1));
    let ok = scratch("commuting.txt");
    std::fs::write(&ok, "# constant curves\np[2] - 1\np[3] - 2\n").unwrap();
    assert_eq!(bin(&["verify", "sigma12", "--generators", ok.to_str().unwrap()]).status.code(), Some(0));
    let bad = scratch("noncommuting.txt");
    std::fs::write(&bad, "p[2]^2 - mu[1]\np[3] - mu[2]\n").unwrap();
    let out = bin(&["verify", "sigma12", "--generators", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // {p2^2 - mu1, p3 - mu2} = -D[mu[1]; x3] + 2 p2 D[mu[2]; x2].
    let r = json(&out)["failures"][0]["residual"].as_str().unwrap().to_string();
    assert_eq!(birkhoff::parse_poly(&r).unwrap(), birkhoff::parse_poly("2*p[2]*D[mu[2]; x2] - D[mu[1]; x3]").unwrap());
}

#[test]
fn library_reports_are_pool_independent() {
    let cfg = RunConfig { nmax: Some(3), ..RunConfig::new(Verb::Equivalence) };
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run(&cfg)).unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| run(&cfg)).unwrap();
    assert_eq!(one.digest, four.digest);
    let mut a = one.clone();
    let mut b = four.clone();
    a.elapsed_ms = 0;
    b.elapsed_ms = 0;
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn every_verb_has_a_default_run() {
    for v in Verb::ALL {
        let r = run(&RunConfig::new(v));
        match v {
            Verb::Sigma12 => assert!(r.is_err()),
            _ => {
                let r = r.unwrap();
                assert_eq!(r.verb, v.name());
                assert!(!r.items.is_empty(), "{}", v.name());
            }
        }
    }
}
