use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::{CommandFactory, Parser};
use jsonschema::{Draft, JSONSchema};
use serde_json::Value;

use super::{commands, run_args, Cli};

struct Run {
    code: u8,
    out: String,
}

fn scratch(ext: &str) -> PathBuf {
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let id = NEXT.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!("zn-test-{}-{id}.{ext}", std::process::id()))
}

/// Runs the CLI in-process with stdout redirected to a scratch file.
fn zn(args: &[&str]) -> Run {
    let path = scratch("out");
    let p = path.to_str().unwrap();
    let tail = ["-o", p];
    let code = run_args(["zn"].iter().chain(args).chain(&tail));
    let out = fs::read_to_string(&path).unwrap_or_default();
    fs::remove_file(&path).ok();
    Run { code, out }
}

fn stdout(args: &[&str]) -> String {
    let run = zn(args);
    assert_eq!(run.code, 0, "{args:?}");
    run.out
}

/// The message printed on a usage or input error.
fn error_message(args: &[&str]) -> String {
    match Cli::try_parse_from(["zn"].iter().chain(args)) {
        Err(e) => e.to_string(),
        Ok(cli) => commands::run(&cli).unwrap_err().to_string(),
    }
}

fn schema(name: &str) -> JSONSchema {
    let path =
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../schemas/{name}.schema.json"));
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::options()
        .with_draft(Draft::Draft202012)
        .compile(&raw)
        .unwrap()
}

fn assert_valid(name: &str, args: &[&str]) -> Value {
    let v: Value = serde_json::from_str(&stdout(args)).unwrap();
    let s = schema(name);
    if let Err(errors) = s.validate(&v) {
        let msgs: Vec<String> = errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        panic!("{args:?} fails {name}: {msgs:?}");
    }
    v
}

#[test]
fn json_outputs_match_schemas() {
    assert_valid("classes", &["classes", "30", "--format", "json"]);
    assert_valid(
        "classes",
        &[
            "classes",
            "12",
            "--members",
            "--format",
            "json",
            "--no-meta",
        ],
    );
    assert_valid("gensets", &["gensets", "30", "--format", "json"]);
    assert_valid(
        "gensets",
        &["gensets", "12", "--expand", "--format", "json"],
    );
    let big = assert_valid(
        "gensets",
        &["gensets", "125829120", "-k", "3", "--format", "json"],
    );
    assert_eq!(big["families"][0]["count"], "590295810358705651712");
    assert_valid("props", &["props", "30", "--format", "json"]);
    assert_valid("props", &["props", "5", "--format", "json"]);
    assert_valid(
        "spectrum",
        &[
            "spectrum", "15", "--matrix", "lap", "--bounds", "--full", "--format", "json",
        ],
    );
    assert_valid(
        "spectrum",
        &["spectrum", "210", "--matrix", "adj", "--format", "json"],
    );
    assert_valid(
        "spectrum",
        &["spectrum", "30", "--matrix", "qtilde", "--format", "json"],
    );
    assert_valid("tables", &["tables", "--paper", "--format", "json"]);
    assert_valid(
        "verify",
        &[
            "verify",
            "--range",
            "2..20",
            "--checks",
            "edges,weyl",
            "--format",
            "json",
        ],
    );
    assert_valid("bench", &["bench", "--range", "10..14", "--format", "json"]);
}

#[test]
fn schemas_reject_wrong_shapes() {
    let s = schema("classes");
    assert!(!s.is_valid(&serde_json::json!({ "n": 30 })));
    let s = schema("props");
    let mut v: Value = serde_json::from_str(&stdout(&["props", "6", "--format", "json"])).unwrap();
    v["diameter"] = Value::from("two");
    assert!(!s.is_valid(&v));
}

#[test]
fn output_is_deterministic_without_meta() {
    for args in [
        &["classes", "30", "--format", "json", "--no-meta"][..],
        &[
            "spectrum",
            "60",
            "--matrix",
            "lap",
            "--bounds",
            "--format",
            "json",
            "--no-meta",
        ],
        &["tables", "--paper", "--no-meta"],
        &[
            "verify",
            "--range",
            "2..40",
            "--checks",
            "edges,degrees,h-join",
            "--no-meta",
        ],
        &["gensets", "60", "--format", "csv"],
    ] {
        assert_eq!(zn(args).out, zn(args).out, "{args:?}");
    }
}

#[test]
fn meta_block_is_optional() {
    let with: Value = serde_json::from_str(&stdout(&["classes", "6", "--format", "json"])).unwrap();
    assert_eq!(with["meta"]["tool"], "zn");
    let without: Value =
        serde_json::from_str(&stdout(&["classes", "6", "--format", "json", "--no-meta"])).unwrap();
    assert!(without.get("meta").is_none());
}

#[test]
fn exit_codes() {
    assert_eq!(zn(&["classes", "1"]).code, 2);
    assert_eq!(zn(&["classes", "abc"]).code, 2);
    assert_eq!(zn(&["verify", "--range", "9..3"]).code, 2);
    assert_eq!(
        zn(&["verify", "--range", "2..9", "--checks", "nope"]).code,
        2
    );
    assert_eq!(zn(&["tables"]).code, 2);
    assert_eq!(zn(&["classes", "6", "--format", "dot"]).code, 2);
    assert_eq!(zn(&["spectrum", "6"]).code, 2);
    assert_eq!(
        zn(&["verify", "--range", "2..60", "--checks", "gensets,edges"]).code,
        0
    );
    assert_eq!(
        zn(&["verify", "--range", "2..10", "--checks", "lap-known"]).code,
        1
    );
    assert_eq!(zn(&["graph", "5000000", "--dense-limit", "100"]).code, 2);
}

#[test]
fn usage_errors_explain_themselves() {
    assert!(error_message(&["spectrum", "1", "--matrix", "adj"]).contains("at least 2"));
    assert!(error_message(&["verify", "--range", "9..3"]).contains("empty range"));
    assert!(error_message(&["tables"]).contains("--paper"));
    assert!(error_message(&["classes", "6", "--format", "dot"]).contains("graph"));
}

#[test]
fn class_table_csv_for_thirty() {
    let csv = stdout(&["classes", "30", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let rows: Vec<(u64, u64, u64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (
                r[0].parse().unwrap(),
                r[2].parse().unwrap(),
                r[3].parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        rows,
        vec![
            (1, 8, 29),
            (2, 8, 15),
            (3, 4, 20),
            (6, 4, 10),
            (5, 2, 24),
            (10, 2, 12),
            (15, 1, 16),
            (30, 1, 8)
        ]
    );
}

#[test]
fn laplacian_bounds_csv_for_fifteen() {
    let csv = stdout(&[
        "spectrum", "15", "--matrix", "lap", "--bounds", "--format", "csv",
    ]);
    assert_eq!(
        csv,
        "j,lower,numeric,upper\n\
         1,11.5347,15,18.5347\n\
         2,10.2633,14,17.2633\n\
         3,7.39355,8,14.3935\n\
         4,-5.19151,0,1.80849\n"
    );
}

#[test]
fn full_precision_keeps_digits() {
    let csv = stdout(&[
        "spectrum",
        "15",
        "--matrix",
        "adj",
        "--bounds",
        "--format",
        "csv",
        "--precision",
        "full",
    ]);
    let second = csv.lines().nth(1).unwrap();
    assert!(second.split(',').nth(1).unwrap().len() > 10, "{second}");
}

#[test]
fn dot_exports() {
    let path = scratch("dot");
    let run = zn(&["graph", "6", "--dot", path.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    let dot = fs::read_to_string(&path).unwrap();
    fs::remove_file(&path).ok();
    assert!(dot.starts_with("graph"));
    assert_eq!(dot.matches(" -- ").count(), 11);
    let h = stdout(&["graph", "30", "--h-graph"]);
    assert!(h.starts_with("graph H") && h.contains("\"1\" -- \"30\""));
}

#[test]
fn props_json() {
    let v: Value = serde_json::from_str(&stdout(&["props", "12", "--format", "json"])).unwrap();
    assert_eq!(v["edge_count"], 46);
    assert_eq!(v["probability"], "23/33");
}

#[test]
fn dense_limit_flag_and_env() {
    let args = ["spectrum", "30", "--matrix", "adj", "--full"];
    let with = |limit: &str| {
        let mut a = args.to_vec();
        a.extend(["--dense-limit", limit]);
        zn(&a).code
    };
    assert_eq!(with("20"), 2);
    assert_eq!(with("30"), 0);
    let cmd = Cli::command();
    let arg = cmd
        .get_arguments()
        .find(|a| a.get_id() == "dense_limit")
        .unwrap();
    assert_eq!(
        arg.get_env().and_then(|e| e.to_str()),
        Some("ZN_DENSE_LIMIT")
    );
}
