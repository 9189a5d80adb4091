use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn subcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subcover")).args(args).output().expect("binary runs")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_temp(contents: &str) -> NamedTempFile {
    let f = NamedTempFile::new().unwrap();
    fs::write(f.path(), contents).unwrap();
    f
}

#[test]
fn lc_human_output() {
    let o = subcover(&["lc", "--field", "2", "--dim", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("LC(F_2^2) = 3\n"));
}

#[test]
fn golden_json_outputs() {
    let cases: [(&[&str], &str); 3] = [
        (&["lc", "--field", "2", "--dim", "2", "--json"], "lc_f2_d2.json"),
        (&["verify-main-theorem", "--field", "2", "--dmax", "2", "--json"], "verify_main_theorem_f2_d2.json"),
        (&["enumerate-hyperplanes", "--field", "2", "--dim", "2"], "hyperplanes_f2_d2.jsonl"),
    ];
    for (args, file) in cases {
        let o = subcover(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o), fs::read_to_string(golden(file)).unwrap(), "{file}");
    }
}

#[test]
fn verify_three_lines() {
    let path = golden("three_lines.json");
    let o = subcover(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["is_cover"], true);
    assert_eq!(v["is_irredundant"], true);
    assert_eq!(v["duplicates"], serde_json::json!([]));
}

#[test]
fn verify_reports_non_covers_and_duplicates() {
    let two = r#"{"field":"3","ambient":2,"kind":"linear","members":[
        {"ambient":2,"field":"3","basis":[[1,0]]},
        {"ambient":2,"field":"3","basis":[[2,0]]},
        {"ambient":2,"field":"3","basis":[]}]}"#;
    let f = write_temp(two);
    let o = subcover(&["verify", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "{\"is_cover\":false,\"is_irredundant\":null,\"duplicates\":[1],\"redundant\":[],\"zero_members\":[2]}\n"
    );
}

#[test]
fn emitted_witness_families_verify() {
    for args in [
        ["ilc", "--field", "3", "--dim", "3", "--json"],
        ["iac", "--field", "2^2", "--dim", "2", "--json"],
    ] {
        let o = subcover(&args);
        assert_eq!(o.status.code(), Some(0));
        let result: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        let f = write_temp(&result["witness"].to_string());
        let o = subcover(&["verify", "--input", f.path().to_str().unwrap()]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["is_cover"], true);
        assert_eq!(v["is_irredundant"], true);
        let o = subcover(&["witness", "--input", f.path().to_str().unwrap(), "--index", "0"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn witness_subcommand() {
    let path = golden("three_lines.json");
    let o = subcover(&["witness", "--input", path.to_str().unwrap(), "--index", "0"]);
    assert_eq!(stdout(&o), "{\"index\":0,\"u\":[1,0],\"v\":[0,1],\"line\":[[0,1],[1,1]],\"hits\":[0,1,1]}\n");
    let o = subcover(&["witness", "--input", path.to_str().unwrap(), "--index", "9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn projective_points_lines() {
    let o = subcover(&["projective-points", "--field", "3", "--dim", "2"]);
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn errors_exit_with_one() {
    assert_eq!(subcover(&["lc", "--field", "6", "--dim", "2"]).status.code(), Some(1));
    assert_eq!(subcover(&["lc", "--field", "2", "--dim", "1"]).status.code(), Some(1));
    assert_eq!(subcover(&["verify", "--input", "/nonexistent/fam.json"]).status.code(), Some(1));

    let f = write_temp("{\n  \"field\": \"2\",\n  \"ambient\": 2,\n  \"kind\": \"linear\",\n  \"members\": [ oops ]\n}");
    let o = subcover(&["verify", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 5"), "{err}");
}

#[test]
fn guardrail_env_var_limits_instances() {
    let o = Command::new(env!("CARGO_BIN_EXE_subcover"))
        .args(["ac", "--field", "3", "--dim", "2"])
        .env("SUBCOVER_GUARDRAIL", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the limit of 5"));
}

#[test]
fn main_theorem_table() {
    let o = subcover(&["verify-main-theorem", "--field", "5", "--dmax", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.trim_end().ends_with("PASS"));
    assert!(!text.contains("FAIL"));
}
