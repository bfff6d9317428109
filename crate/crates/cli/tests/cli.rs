use std::process::{Command, Output};

use serde_json::Value;

fn tensorcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tensorcat"))
        .args(args)
        .env_remove("TENSORCAT_CAPS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = tensorcat(&all);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("one JSON object")
}

#[test]
fn info_on_the_trivial_group() {
    let v = json(&["info", "cyclic:1"]);
    assert_eq!(v["order"], 1);
    assert_eq!(v["class"], 0);
    assert_eq!(v["abelianization"], serde_json::json!([]));
}

#[test]
fn square_of_d4() {
    let v = json(&["square", "dihedral:4"]);
    assert_eq!(v["bogomolov_trivial"], true);
    assert_eq!(v["tensor_square_order"], 32);
    assert_eq!(v["exterior_square_order"], 4);
    assert_eq!(v["schur_multiplier"], serde_json::json!([2]));
}

#[test]
fn tensor_of_a_trivial_pair() {
    // Z4 (x) (Z2 x Z2) with trivial actions is Z4 (x) Z2 twice.
    let v = json(&["tensor", "cyclic:4", "abelian:2:2"]);
    assert_eq!(v["order"], 4);
    assert_eq!(v["kernel_phi"], serde_json::json!([2, 2]));
    assert_eq!(v["derivative_g"], 1);
}

#[test]
fn action_files_are_read() {
    // Z2 acting on Z3 by inversion, written out element by element.
    let dir = std::env::temp_dir().join(format!("tensorcat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("alpha.txt");
    std::fs::write(
        &path,
        "# the generator of Z2 inverts Z3\nact 1 1 -> 2\nact 1 2 -> 1\n",
    )
    .unwrap();
    let from_file = json(&[
        "tensor",
        "cyclic:2",
        "cyclic:3",
        "--alpha",
        path.to_str().unwrap(),
    ]);
    let named = json(&["tensor", "cyclic:2", "cyclic:3", "--alpha", "inversion"]);
    assert_eq!(from_file, named);
    // phi maps onto D_G(H) = Z3, so the product is not trivial despite coprime orders.
    assert_eq!(from_file["order"], 3);
    std::fs::write(&path, "act 1 1 -> 7\n").unwrap();
    let out = tensorcat(&[
        "tensor",
        "cyclic:2",
        "cyclic:3",
        "--alpha",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn json_is_byte_stable() {
    let args = [
        "--format",
        "json",
        "--threads",
        "1",
        "verify",
        "--suite",
        "kappa-J",
        "--max-order",
        "8",
    ];
    let a = tensorcat(&args);
    let mut four = args.to_vec();
    four[3] = "4";
    let b = tensorcat(&four);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let first: Value =
        serde_json::from_str(String::from_utf8_lossy(&a.stdout).lines().next().unwrap()).unwrap();
    let keys: Vec<&String> = first.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("runtime"));
}

#[test]
fn verify_b0_trivial_up_to_32_succeeds() {
    let out = tensorcat(&["verify", "--suite", "b0-trivial", "--max-order", "32"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn corpus_files_take_inline_and_json_lines() {
    let dir = std::env::temp_dir().join(format!("tensorcat-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("corpus.txt");
    std::fs::write(
        &path,
        "# two groups\ndihedral:4\n{\"kind\":\"metacyclic\",\"m\":5,\"n\":4,\"r\":2}\n",
    )
    .unwrap();
    let out = tensorcat(&[
        "--format",
        "json",
        "verify",
        "--suite",
        "b0-trivial",
        "--corpus",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 3);
    std::fs::write(&path, "dihedral:4\ncyclic:x\n").unwrap();
    let out = tensorcat(&["verify", "--corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(tensorcat(&["info", "bogus:3"]).status.code(), Some(2));
    assert_eq!(
        tensorcat(&["verify", "--suite", "no-such-suite"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        tensorcat(&["--max-order", "100", "info", "symmetric:6"])
            .status
            .code(),
        Some(3)
    );
    let stderr =
        String::from_utf8_lossy(&tensorcat(&["--max-order", "100", "info", "symmetric:6"]).stderr)
            .to_string();
    assert!(stderr.contains("720"), "{stderr}");
    let out = Command::new(env!("CARGO_BIN_EXE_tensorcat"))
        .args(["info", "cyclic:2"])
        .env("TENSORCAT_CAPS", r#"{"max_pair_order": 1000000}"#)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_tensorcat"))
        .args(["--format", "json", "info", "cyclic:2"])
        .env("TENSORCAT_CAPS", r#"{"max_group_order": 2}"#)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
