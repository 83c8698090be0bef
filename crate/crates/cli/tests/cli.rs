use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_recollement")
}

fn specs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("recollement-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn axioms_on_a2_pass() {
    let spec = specs_dir().join("a2_e2_axioms.spec");
    let out = run(&["--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["status"], "PASS");
    assert_eq!(r["universe"]["middle"]["names"], serde_json::json!(["D01#1", "D10#1", "D11#1"]));
    assert_eq!(r["universe"]["algebra_hash"].as_str().unwrap().len(), 64);
    assert!(r["verification"].as_array().unwrap().iter().all(|e| e["verdict"] != "FAIL"));
}

#[test]
fn non_exact_glue_is_refused() {
    let spec = specs_dir().join("a2_e1_glue_weak_tau.spec");
    let out = run(&["--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["status"], "REFUSED");
    assert!(r["result"].is_null());
    assert!(String::from_utf8_lossy(&out.stderr).contains("i* exact"));
}

#[test]
fn malformed_spec_exits_one() {
    let d = scratch("bad");
    let p = d.join("bad.spec");
    std::fs::write(&p, "[algebra]\nfield = 2\nvertices = 1\nx 1 1\n[recollement]\ne = 1\n[task]\nname = exactness\n").unwrap();
    let out = run(&["--spec", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
    std::fs::write(&p, "[algebra]\nfield = 2\nvertices = 1, 2\na: 1 -> 2\n[recollement]\ne = 1\n[task]\nname = is_wakamatsu\nsubcat = D99#1\n").unwrap();
    let out = run(&["--spec", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("D99#1"));
    let _ = std::fs::remove_dir_all(&d);
}

#[test]
fn several_specs_write_a_directory_deterministically() {
    let mut specs: Vec<PathBuf> = std::fs::read_dir(specs_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "spec"))
        .collect();
    specs.sort();
    let read_all = |dir: &Path| -> Vec<(String, Vec<u8>)> {
        let mut v: Vec<_> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| {
                let p = e.unwrap().path();
                (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
            })
            .collect();
        v.sort();
        v
    };
    let mut runs = Vec::new();
    for (i, jobs) in ["1", "4"].iter().enumerate() {
        let out_dir = scratch(&format!("multi{i}"));
        let mut args = vec!["--jobs".to_string(), jobs.to_string(), "--out".into(), out_dir.display().to_string()];
        for s in &specs {
            args.push("--spec".into());
            args.push(s.display().to_string());
        }
        let out = Command::new(bin()).args(&args).output().unwrap();
        // The refused example sets the overall code.
        assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
        runs.push(read_all(&out_dir));
        let _ = std::fs::remove_dir_all(&out_dir);
    }
    assert_eq!(runs[0].len(), specs.len());
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn force_marks_unsound() {
    let spec = specs_dir().join("a2_e1_glue_weak_tau.spec");
    let out = run(&["--spec", spec.to_str().unwrap(), "--force"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["status"], "UNSOUND");
    assert!(!r["result"].is_null());
}
