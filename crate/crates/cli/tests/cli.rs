use assert_cmd::Command;
use serde_json::Value;
use tempfile::TempDir;

fn boxcode() -> Command {
    let mut cmd = Command::cargo_bin("boxcode").unwrap();
    cmd.env("BOXCODE_THREADS", "1");
    cmd
}

fn stdout_json(cmd: &mut Command) -> Value {
    let out = cmd.assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn product_of_files() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"n":5,"codewords":[[1,2,4],[1,3,5],[1],[]]}"#);
    let b = write(&dir, "b.json", r#"{"n":5,"codewords":[[1,2,3],[1,4,5],[1],[]]}"#);
    let v = stdout_json(boxcode().args(["product", &a, &b]));
    assert_eq!(
        v["codewords"],
        serde_json::json!([[1, 2], [1, 3], [1, 4], [1, 5], [1], []])
    );
    assert_eq!(v["n"], 5);
}

#[test]
fn sunflower_dimension() {
    let dir = TempDir::new().unwrap();
    let f4 = write(&dir, "f4.json", r#"{"n":4,"codewords":[[1,2,3,4],[1],[2],[3],[4],[]]}"#);
    boxcode().args(["bdim", &f4]).assert().success().stdout("{\"bdim\":2}\n");
    let v = stdout_json(boxcode().args(["sunflower", "--n", "6"]));
    assert_eq!(v["factors"].as_array().unwrap().len(), 3);
}

#[test]
fn named_codes_are_not_box_convex() {
    for name in ["C1", "C2", "C3", "C4"] {
        let v = stdout_json(boxcode().args(["bdim", name]));
        assert_eq!(v["bdim"], "not_box_convex", "{name}");
    }
}

#[test]
fn expect_sets_exit_status() {
    boxcode()
        .args(["is-interval-code", "123, 12, 13", "--expect", "true"])
        .assert()
        .success();
    boxcode()
        .args(["is-interval-code", "12, 13, 23, 1, 2, 3", "--expect", "true"])
        .assert()
        .code(1);
    boxcode()
        .args(["is-box-convex", "1234, 1, 2, 3, 4", "--dim", "1", "--expect", "false"])
        .assert()
        .success();
}

#[test]
fn validation_errors_exit_two() {
    boxcode().args(["bdim", "12, 5", "--n", "3"]).assert().code(2);
    boxcode().args(["bdim", "12, 1", "--strict"]).assert().code(2);
    boxcode().args(["sunflower", "--n", "3"]).assert().code(2);
    boxcode().args(["interval-codes", "--n", "5"]).assert().code(2);
    boxcode().args(["no-such-command"]).assert().code(2);
    let out = boxcode().args(["named-code", "C9"]).assert().code(2).get_output().stderr.clone();
    let msg = String::from_utf8(out).unwrap();
    assert_eq!(msg.lines().count(), 1);
}

#[test]
fn realize_then_recompute() {
    let dir = TempDir::new().unwrap();
    let out = boxcode()
        .args(["realize-interval", "123, 24, 12, 23, 1, 2, 4"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let r = write(&dir, "r.json", std::str::from_utf8(&out).unwrap());
    let v = stdout_json(boxcode().args(["code-of", &r]));
    assert_eq!(
        v["codewords"],
        serde_json::json!([[1, 2, 3], [1, 2], [2, 3], [2, 4], [1], [2], [4], []])
    );
    boxcode().args(["realize-interval", "C3"]).assert().code(1);
}

#[test]
fn open_boxes_and_normalization() {
    let dir = TempDir::new().unwrap();
    let r = write(
        &dir,
        "r.json",
        r#"{"dim":1,"boxes":[{"intervals":[["0","1"]]},{"intervals":[["1","3/2"]]}]}"#,
    );
    let closed = stdout_json(boxcode().args(["code-of", &r]));
    let open = stdout_json(boxcode().args(["code-of", "--open", &r]));
    assert_eq!(closed["codewords"], serde_json::json!([[1, 2], [1], [2], []]));
    assert_eq!(open["codewords"], serde_json::json!([[1], [2], []]));
    let v = stdout_json(boxcode().args(["normalize", &r]));
    assert_eq!(v["report"]["closed_code_preserved"], true);
    assert_eq!(v["report"]["interiors_realize_code"], true);
    assert_eq!(v["report"]["integer_corners_in_range"], true);
}

#[test]
fn closure_emits_layers() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("layers.json");
    let v = stdout_json(boxcode().args(["closure", "--n", "3", "--emit", path.to_str().unwrap()]));
    assert_eq!(v["fixpoint_reached"], true);
    let layers: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let layers = layers["layers"].as_array().unwrap();
    assert_eq!(layers.len(), v["layer_sizes"].as_array().unwrap().len());
    assert_eq!(layers[0].as_array().unwrap().len(), 93);
}

#[test]
fn monotone_extension_and_factorization() {
    let v = stdout_json(boxcode().args(["monotone-extend", "123", "[[1,2],[1],[2]]"]));
    assert_eq!(v["union"]["codewords"], serde_json::json!([[1, 2, 3], [1, 2], [1], [2], []]));
    boxcode().args(["monotone-extend", "123", "[[1,2]]"]).assert().code(2);
    let v = stdout_json(boxcode().args(["factorize", "1234, 1, 2, 3, 4"]));
    assert_eq!(v["count"], 3);
}

#[test]
fn classification_matches_table() {
    let v = stdout_json(boxcode().args(["classify3", "--golden", "builtin"]));
    assert_eq!(v["matches_golden"], true);
    assert_eq!(v["codes"].as_array().unwrap().len(), 33);
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "g.json", r#"{"n":3,"classes":{"interval":["1"]}}"#);
    boxcode().args(["classify3", "--golden", &bad]).assert().code(1);
}

#[test]
fn output_is_byte_stable() {
    let run = || {
        boxcode()
            .args(["interval-codes", "--n", "3"])
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    assert_eq!(run(), run());
}

#[test]
fn selftest_single_criterion() {
    boxcode()
        .args(["selftest", "--criterion", "2"])
        .assert()
        .success()
        .stdout(predicates::str::contains("[PASS]"));
}
