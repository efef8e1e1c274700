use std::process::{Command, Output};

use serde_json::Value;

fn loopforge(dir: &std::path::Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopforge")).args(args).current_dir(dir).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn construct_then_load_every_small_fixture() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["s3", "cyclic:5", "chein:s3", "cml81"] {
        let out = loopforge(dir.path(), &["construct", "--kind", kind, "-o", "l.json"]);
        assert_eq!(out.status.code(), Some(0), "{kind}");
        let bytes = std::fs::read(dir.path().join("l.json")).unwrap();
        assert_eq!(bytes.last(), Some(&b'\n'));
        let stdout = loopforge(dir.path(), &["construct", "--kind", kind]).stdout;
        assert_eq!(stdout, bytes);
        let out = loopforge(dir.path(), &["check", "--loop", "l.json", "--property", "moufang"]);
        assert_eq!(out.status.code(), Some(0), "{kind} is Moufang");
    }
}

#[test]
fn series_reports_class_two_for_cml81() {
    let dir = tempfile::tempdir().unwrap();
    let out = loopforge(dir.path(), &["series", "--loop", "cml81", "--series", "upper", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["series"]["nilpotency_class"], 2);
    assert_eq!(v["series"]["kind"], "upper_central");
}

#[test]
fn sampled_outputs_record_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = loopforge(dir.path(), &["algebra", "--loop", "c3", "--field", "gf:3", "--seed", "77", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["alternative"]["seed"], 77);
    let out =
        loopforge(dir.path(), &["check", "--loop", "cml81", "--property", "identity44", "--samples", "50", "--json"]);
    assert_eq!(json(&out)["report"]["seed"], 0xA17E41);
}

#[test]
fn obstructed_and_collapsing_verdicts_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = loopforge(dir.path(), &["embed", "--loop", "chein12", "--field", "gf:7", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["outcome"], "collapses");
    assert!(v["collision"].is_array());
    assert_eq!(v["checks"]["r3"], true);
}

#[test]
fn radical_and_report_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = loopforge(dir.path(), &["radical", "--loop", "chein12", "--field", "gf:7", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["radical_order"], 12);
    assert_eq!(v["in_class"]["value"], true);

    let out = loopforge(dir.path(), &["report", "--loop", "s3", "--field", "gf:7", "-o", "r.json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("r.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["report"]["quotient_dim"], 1);
}

#[test]
fn bad_input_exits_two_and_names_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"order\":2,\"elements\":[\"e\",\"a\"],\"table\":[[0,1],[1,1]]}")
        .unwrap();
    let out = loopforge(dir.path(), &["check", "--loop", "bad.json", "--property", "ip"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--loop"));
    let out = loopforge(dir.path(), &["embed", "--loop", "c3", "--field", "gf:6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--field"));
    let out = loopforge(dir.path(), &["construct", "--kind", "paige:9"]);
    assert_eq!(out.status.code(), Some(2));
}
