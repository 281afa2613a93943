use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fracpow_lab::report::body_of;
use serde_json::Value;

fn fracpow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracpow")).args(args).env_remove("FRACPOW_OUTPUT_DIR").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn report(args: &[&str]) -> Value {
    let out = fracpow(args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(code(&fracpow(&["--help"])), 0);
    assert_eq!(code(&fracpow(&["--version"])), 0);
    assert_eq!(code(&fracpow(&["no-such-command"])), 1);
    assert_eq!(code(&fracpow(&["bks", "--p", "1"])), 1, "missing --theta");
    assert_eq!(code(&fracpow(&["bks", "--p", "-1", "--theta", "0.5"])), 1);
    assert_eq!(code(&fracpow(&["estimate-constant", "--p", "0.5", "--theta", "0.5", "--trials", "0"])), 1);
    assert_eq!(code(&fracpow(&["bks", "--p", "0.25", "--theta", "0.5", "--trials", "3"])), 1, "p < θ");
    assert_eq!(code(&fracpow(&["factorize", "--kernel", "nonsense"])), 1);
    assert_eq!(code(&fracpow(&["mazur", "--p", "2", "--q", "1", "--trials", "2"])), 1);
}

#[test]
fn violations_exit_two_and_still_write_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ando.json");
    let out = fracpow(&["verify-ando", "--trials", "5", "--assert-max", "0.5", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(!doc["body"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn unwritable_output_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let target = blocker.join("report.json");
    assert_eq!(code(&fracpow(&["mazur", "--trials", "2", "--output", target.to_str().unwrap()])), 1);
}

#[test]
fn reports_carry_config_seed_version_and_duration() {
    let doc = report(&["bks", "--p", "1", "--theta", "0.5", "--dims", "2,4,6", "--trials", "1000", "--seed", "7"]);
    let body = &doc["body"];
    assert_eq!(body["command"], "bks");
    assert_eq!(body["seed"], 7);
    assert_eq!(body["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(body["config"]["trials"], 1000);
    assert!(doc["header"]["duration_seconds"].as_f64().unwrap() >= 0.0);
    let max: f64 = body["results"]["max_ratio"].as_str().unwrap().parse().unwrap();
    assert!(max <= 1.0 + 1e-9 && max > 0.9);
    assert_eq!(body["results"]["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn kernel_spectrum_csv_has_the_comparison_columns() {
    let out = fracpow(&["kernel-spectrum", "--kmax", "10", "--nystrom", "500", "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let table: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(table[0], "k,theta_k,lambda_k,nystrom_lambda_k,rel_err,residual");
    assert_eq!(table.len(), 11);
    let joined = table.join("\n");
    let mut rd = csv::Reader::from_reader(joined.as_bytes());
    for row in rd.records() {
        let row = row.unwrap();
        let rel: f64 = row[4].parse().unwrap();
        assert!(rel < 1e-2, "{row:?}");
    }
}

#[test]
fn identical_configs_give_identical_bodies() {
    let runs: &[&[&str]] = &[
        &["bks", "--p", "2", "--theta", "0.5", "--trials", "50", "--seed", "3"],
        &["commutator", "--trials", "30", "--anti", "minus"],
        &["mazur", "--trials", "30", "--p", "0.5", "--q", "2"],
        &["weak-lp", "--trials", "20"],
        &["kfunctional", "--values", "2,1,0.5", "--theta", "0.5", "--pairs", "3", "--grid", "32"],
        &["verify-ando", "--trials", "10", "--p", "0.5,inf", "--format", "csv"],
    ];
    for args in runs {
        let a = fracpow(args);
        let b = fracpow(args);
        assert_eq!(code(&a), 0, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(body_of(&stdout(&a)).unwrap(), body_of(&stdout(&b)).unwrap(), "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let base = ["estimate-constant", "--p", "0.5", "--theta", "0.5", "--dims", "2,3,5", "--trials", "40", "--seed", "9"];
    let one = fracpow(&[&base[..], &["--threads", "1"]].concat());
    let three = fracpow(&[&base[..], &["--threads", "3"]].concat());
    assert_eq!(body_of(&stdout(&one)).unwrap(), body_of(&stdout(&three)).unwrap());
    let bks = ["bks", "--p", "1", "--theta", "0.75", "--trials", "60"];
    let one = fracpow(&[&bks[..], &["--threads", "1"]].concat());
    let four = fracpow(&[&bks[..], &["--threads", "4"]].concat());
    assert_eq!(body_of(&stdout(&one)).unwrap(), body_of(&stdout(&four)).unwrap());
}

#[test]
fn resumed_searches_match_uninterrupted_ones() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    let ck = ck.to_str().unwrap();
    let common = ["estimate-constant", "--p", "1", "--theta", "0.5", "--signed", "--dims", "2,3", "--seed", "4"];
    let full = fracpow(&[&common[..], &["--trials", "45"]].concat());
    // An interrupted run leaves a checkpoint at 20 trials.
    let part = fracpow(&[&common[..], &["--trials", "20", "--checkpoint-every", "7", "--checkpoint", ck]].concat());
    assert_eq!(code(&part), 0);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(ck).unwrap()).unwrap();
    assert_eq!(saved["end"], 20);
    let resumed = fracpow(&[&common[..], &["--trials", "45", "--resume", ck]].concat());
    assert_eq!(code(&resumed), 0, "{}", String::from_utf8_lossy(&resumed.stderr));
    assert_eq!(body_of(&stdout(&full)).unwrap(), body_of(&stdout(&resumed)).unwrap());
    // Checkpoints from another search are refused.
    let other = fracpow(&["estimate-constant", "--p", "1", "--theta", "0.5", "--dims", "2,3", "--seed", "4", "--trials", "45", "--resume", ck]);
    assert_eq!(code(&other), 1);
}

#[test]
fn witnesses_reevaluate_offline() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("search.json");
    let out = fracpow(&["estimate-constant", "--p", "0.5", "--theta", "0.5", "--dims", "3", "--trials", "12", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let search: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let again = report(&["verify-ando", "--pair", path.to_str().unwrap(), "--p", "0.5", "--theta", "0.5"]);
    assert_eq!(search["body"]["results"]["best_ratio"], again["body"]["results"]["max_ratio"]);
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_fracpow"))
        .args(["mazur", "--trials", "3", "--format", "csv"])
        .env("FRACPOW_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("mazur.csv")).unwrap();
    assert!(text.starts_with("# fracpow version="));
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

#[test]
fn shipped_schemas_are_current() {
    for (name, schema) in fracpow_lab::schema::all() {
        let path = schema_dir().join(format!("{name}.schema.json"));
        let shipped = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert_eq!(shipped, fracpow_lab::schema::render(&schema).unwrap(), "{name}: regenerate with `fracpow schema --out-dir crates/lab/schemas`");
    }
}

fn resolve<'a>(root: &'a Value, node: &'a Value) -> &'a Value {
    match node.get("$ref").and_then(Value::as_str) {
        Some(r) => &root["definitions"][r.trim_start_matches("#/definitions/")],
        None => node,
    }
}

#[test]
fn report_fields_are_declared_in_the_schemas() {
    let runs: &[(&str, &[&str])] = &[
        ("mazur", &["mazur", "--trials", "3"]),
        ("weak-lp", &["weak-lp", "--trials", "3"]),
        ("kernel-spectrum", &["kernel-spectrum", "--kmax", "3", "--sums-k", "10,100"]),
        ("factorize", &["factorize", "--kernel", "cos-cos", "--grid", "64", "--cutoff", "8", "--samples", "4"]),
    ];
    for (name, args) in runs {
        let doc = report(args);
        let root: Value = serde_json::from_str(&std::fs::read_to_string(schema_dir().join(format!("{name}.schema.json"))).unwrap()).unwrap();
        let body = resolve(&root, &root["properties"]["body"]);
        for section in ["config", "results"] {
            let props = &resolve(&root, &body["properties"][section])["properties"];
            for key in doc["body"][section].as_object().unwrap().keys() {
                assert!(props.get(key).is_some(), "{name}: {section}.{key} missing from the schema");
            }
        }
    }
}
