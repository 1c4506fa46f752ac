use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::{Resource, Validator};
use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_treespectrum"));
    cmd.env_remove("TREESPECTRUM_THREADS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schemas")
        .join(name);
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn validator(name: &str) -> Validator {
    let record = schema("verification_record.schema.json");
    let id = record["$id"].as_str().unwrap().to_owned();
    jsonschema::options()
        .with_resource(id, Resource::from_contents(record).unwrap())
        .build(&schema(name))
        .unwrap()
}

fn assert_valid(validator: &Validator, doc: &Value) {
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

#[test]
fn continuant_eval_prints_pair_and_value() {
    let out = run(&["continuant", "eval", "--word", "2,3,4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "pair 18,5\nvalue 18/5\n");
}

#[test]
fn continuant_eval_json() {
    let out = run(&["continuant", "eval", "--word", "2,2,2", "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["k_r"], "4");
    assert_eq!(doc["k_r_minus_1"], "3");
    assert_eq!(doc["value"], "4/3");
}

#[test]
fn reconstruct_roundtrip_and_rejection() {
    let out = run(&["continuant", "reconstruct", "--pair", "18,5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "word 2,3,4\n");

    let out = run(&["continuant", "reconstruct", "--pair", "4,2"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).is_empty());
    assert!(
        stderr(&out).contains("not a continuant pair"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn verify_example_is_all_true_and_matches_schema() {
    let out = run(&[
        "verify", "--m", "3", "--q", "2", "--word", "2,3,2", "--pad", "3",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_valid(&validator("verification_record.schema.json"), &doc);
    assert_eq!(doc["d_w"], "40");
    for (name, flag) in doc["flags"].as_object().unwrap() {
        assert_eq!(flag, &Value::Bool(true), "flag {name}");
    }
}

#[test]
fn verify_rejects_bad_parameters() {
    // entry 4 exceeds q + 1
    let out = run(&["verify", "--m", "3", "--q", "2", "--word", "2,4,2"]);
    assert_eq!(code(&out), 1);
    // length disagrees with m
    let out = run(&["verify", "--m", "4", "--q", "2", "--word", "2,3,2"]);
    assert_eq!(code(&out), 1);
    let out = run(&["verify", "--m", "3", "--q", "2", "--word", "2,1,2"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn spectrum_json_matches_schema() {
    let v = validator("spectrum_report.schema.json");
    for args in [
        &["spectrum", "--m", "3", "--q", "2"][..],
        &[
            "spectrum", "--m", "3", "--q", "3", "--pad", "2", "--eta", "1/4",
        ][..],
        &["spectrum", "--m", "4", "--q", "1"][..],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
        let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_valid(&v, &doc);
    }
}

#[test]
fn spectrum_report_for_small_family() {
    let out = run(&["spectrum", "--m", "3", "--q", "2"]);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["total_words"], 8);
    assert_eq!(doc["distinct_pairs"], 8);
    assert_eq!(doc["distinct_divisors"], 8);
    let divisors: Vec<&str> = doc["divisor_values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(divisors, ["12", "21", "35", "40", "60", "65", "104", "168"]);
}

#[test]
fn spectrum_csv_has_one_row_per_word() {
    let out = run(&["spectrum", "--m", "3", "--q", "2", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "word;K_m;K_m_minus_1;D_w;tau;flags");
    assert_eq!(lines.len(), 9);
    assert!(lines[1].starts_with("2,2,2;4;3;12;"));
    assert!(lines[1..].iter().all(|l| !l.contains("=false")));
}

#[test]
fn spectrum_budget_is_a_domain_error() {
    let out = run(&["spectrum", "--m", "3", "--q", "2", "--budget", "5"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).is_empty());
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        &["spectrum", "--m", "3", "--q", "3"][..],
        &["spectrum", "--m", "3", "--q", "3", "--format", "csv"][..],
        &[
            "selftest", "--seed", "9", "--shrink", "20", "--format", "json",
        ][..],
    ] {
        let a = run(args);
        let b = bin()
            .args(args)
            .env("TREESPECTRUM_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn output_flag_writes_the_same_document() {
    let path = scratch("report.json");
    let out = run(&[
        "spectrum",
        "--m",
        "3",
        "--q",
        "1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let direct = run(&["spectrum", "--m", "3", "--q", "1"]);
    assert_eq!(fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn build_then_count() {
    let path = scratch("h_234.json");
    let out = run(&[
        "build",
        "--kind",
        "multigraph",
        "--word",
        "2,3,4",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let p = path.to_str().unwrap();
    // D = 18 * 5
    for method in ["kirchhoff", "enumerate"] {
        let out = run(&["tau", "--input", p, "--method", method]);
        assert_eq!(stdout(&out), "tau 90\n", "{method}");
    }
    let out = run(&[
        "tau",
        "--input",
        p,
        "--method",
        "enumerate",
        "--budget",
        "3",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn padded_simple_graph_keeps_its_count() {
    let plain = scratch("g_232.json");
    let padded = scratch("g_232_padded.json");
    run(&[
        "build",
        "--kind",
        "simple",
        "--word",
        "2,3,2",
        "-o",
        plain.to_str().unwrap(),
    ]);
    let out = run(&[
        "build",
        "--kind",
        "simple",
        "--word",
        "2,3,2",
        "--pad-to",
        "20",
        "-o",
        padded.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&padded).unwrap()).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 20);
    let a = run(&["tau", "--input", plain.to_str().unwrap()]);
    let b = run(&["tau", "--input", padded.to_str().unwrap()]);
    assert_eq!(stdout(&a), "tau 5440\n");
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn build_dot_output() {
    let out = run(&[
        "build",
        "--kind",
        "multigraph",
        "--word",
        "2,2,2",
        "--format",
        "dot",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("graph G {"));
}

#[test]
fn malformed_graph_file_is_rejected() {
    let path = scratch("broken.json");
    fs::write(
        &path,
        r#"{"vertices":[{"id":0,"role":"rho"}],"edges":[{"u":0,"v":0,"mult":1}]}"#,
    )
    .unwrap();
    let out = run(&["tau", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let out = run(&["tau", "--input", scratch("missing.json").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(
        code(&run(&["spectrum", "--m", "3", "--q", "2", "--frobnicate"])),
        1
    );
    assert_eq!(code(&run(&["spectrum", "--m", "3"])), 1);
    assert_eq!(
        code(&run(&[
            "spectrum", "--m", "3", "--q", "2", "--format", "dot"
        ])),
        1
    );
    assert_eq!(
        code(&run(&[
            "continuant",
            "eval",
            "--word",
            "2,3",
            "--format",
            "csv"
        ])),
        1
    );
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn thread_count_from_flag_and_environment() {
    assert_eq!(
        code(&run(&[
            "--threads",
            "2",
            "spectrum",
            "--m",
            "3",
            "--q",
            "1"
        ])),
        0
    );
    assert_eq!(
        code(&run(&[
            "--threads",
            "0",
            "spectrum",
            "--m",
            "3",
            "--q",
            "1"
        ])),
        1
    );
    let out = bin()
        .args(["spectrum", "--m", "3", "--q", "1"])
        .env("TREESPECTRUM_THREADS", "nope")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest", "--shrink", "10"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().count(), 8);
    assert!(stdout(&out).lines().all(|l| l.ends_with(" ok")));
}

#[test]
fn schema_rejects_malformed_records() {
    let v = validator("verification_record.schema.json");
    let out = run(&["verify", "--m", "3", "--q", "1", "--word", "2,2,2"]);
    let good: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_valid(&v, &good);

    let mut numeric = good.clone();
    numeric["d_w"] = Value::from(12);
    assert!(!v.is_valid(&numeric));
    let mut extra = good.clone();
    extra["flags"]["bonus"] = Value::Bool(true);
    assert!(!v.is_valid(&extra));
    let mut missing = good;
    missing.as_object_mut().unwrap().remove("tau_simple");
    assert!(!v.is_valid(&missing));
}
