use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn ainf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ainf")).args(args).output().expect("binary runs")
}

fn ainf_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ainf"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn golden_reports() {
    let cases: &[(&[&str], &str)] = &[
        (&["transfer", "heisenberg", "--degree-cap", "6"], "transfer_heisenberg.json"),
        (&["fiber", "hopf", "--degree-cap", "6"], "fiber_hopf.json"),
        (&["twist-transfer", "cp2", "--degree-cap", "8"], "twist_transfer_cp2.json"),
        (&["loop-space", "s3", "--degree-cap", "8"], "loop_space_s3.json"),
        (&["massey", "heisenberg", "--degree-cap", "6", "--triple", "e1,e2,e2"], "massey_heisenberg.json"),
    ];
    for (args, file) in cases {
        let mut a = args.to_vec();
        a.extend(["--output", "json"]);
        let out = ainf(&a);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout(&out), golden(file), "{args:?}");
    }
}

#[test]
fn same_run_twice_is_byte_identical() {
    for fmt in ["json", "table"] {
        let args = ["massey", "heisenberg", "--degree-cap", "6", "--output", fmt];
        assert_eq!(ainf(&args).stdout, ainf(&args).stdout);
    }
}

#[test]
fn loop_space_of_s3_table() {
    let out = ainf(&["loop-space", "s3", "--degree-cap", "8", "--output", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let b: Vec<u64> = serde_json::from_value(v["betti"]["B̃(H)"].clone()).unwrap();
    assert_eq!(b, [1, 0, 1, 0, 1, 0, 1, 0, 1]);
}

#[test]
fn fiber_of_hopf_has_homology_of_s3() {
    let out = ainf(&["fiber", "hopf", "--degree-cap", "6", "--output", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["K⊗_φD", "K⊗_φ*H(D)"] {
        let b: Vec<u64> = serde_json::from_value(v["betti"][key].clone()).unwrap();
        assert_eq!(&b[..4], [1, 0, 0, 1], "{key}");
    }
}

#[test]
fn classifying_space_agrees_with_tilde_b() {
    let cs = ainf(&["classifying-space", "cp2", "--degree-cap", "6", "--output", "json"]);
    let tb = ainf(&["tilde-b", "cp2", "--degree-cap", "6", "--output", "json"]);
    let cs: serde_json::Value = serde_json::from_slice(&cs.stdout).unwrap();
    let tb: serde_json::Value = serde_json::from_slice(&tb.stdout).unwrap();
    assert_eq!(cs["betti"], tb["betti"]);
    assert_eq!(cs["betti"]["B(C)"], cs["betti"]["B̃(H)"]);
}

#[test]
fn model_from_stdin() {
    let text = "schema = 1\nname = \"piped\"\nfield = \"Zp:3\"\ngrading = \"cohomological\"\n\n[algebra]\ngenerators = [[\"1\", 0], [\"x\", 2]]\nunit = \"1\"\n";
    let out = ainf_stdin(&["transfer", "-", "--degree-cap", "4", "--output", "json"], text);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["model"], "piped");
    assert_eq!(v["field"], "Zp:3");
}

#[test]
fn empty_model_gives_empty_valid_report() {
    let out = ainf_stdin(&["transfer", "-", "--degree-cap", "4", "--output", "json"], "[algebra]\n");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] != false));
}

#[test]
fn exit_codes() {
    assert_eq!(ainf(&["transfer", "s2"]).status.code(), Some(1));
    assert_eq!(ainf(&["transfer", "s2", "--degree-cap", "4", "--field", "Zp:4"]).status.code(), Some(1));
    assert_eq!(ainf(&["transfer", "no-such-model", "--degree-cap", "4"]).status.code(), Some(1));
    assert_eq!(ainf(&["fiber", "s2", "--degree-cap", "4"]).status.code(), Some(1));
    assert_eq!(ainf(&["massey", "heisenberg", "--degree-cap", "6", "--triple", "e1,e2"]).status.code(), Some(1));
    assert_eq!(ainf(&["--help"]).status.code(), Some(0));

    let bad_d = "grading = \"cohomological\"\n[algebra]\ngenerators = [[\"x\", 1], [\"y\", 2], [\"z\", 3]]\ndifferential = { x = \"y\", y = \"z\" }\n";
    let out = ainf_stdin(&["transfer", "-", "--degree-cap", "4"], bad_d);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d∘d"));

    let parse_err = "[algebra\n";
    let out = ainf_stdin(&["transfer", "-", "--degree-cap", "4"], parse_err);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn cap_overflow_is_reported() {
    let out = ainf(&["transfer", "s2", "--degree-cap", "4", "--arity-cap", "50"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}
