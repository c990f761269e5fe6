use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn gcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcf"))
        .args(args)
        .output()
        .expect("gcf runs")
}

fn stdout(args: &[&str]) -> String {
    let o = gcf(args);
    assert!(
        o.status.success(),
        "{:?}: {}",
        args,
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap().trim_end().to_string()
}

fn code(args: &[&str]) -> i32 {
    gcf(args).status.code().expect("exit code")
}

fn golden(name: &str) -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    serde_json::from_str(&stdout(&a)).unwrap()
}

#[test]
fn expand_examples() {
    assert_eq!(stdout(&["expand", "mgcf", "0"]), "J");
    assert_eq!(stdout(&["expand", "ocf", "5/14"]), "0;2,1,4");
    assert_eq!(stdout(&["expand", "ocf", "--theta", "-5/14"]), "-1;1,1,1,4");
    assert_eq!(stdout(&["expand", "cutting", "5/14"]), "JLLC1LLLLJ");
    assert_eq!(stdout(&["expand", "acf", "1/2"]), "FRRF");
    assert_eq!(stdout(&["expand", "farey", "5/4"]), "RDDDD");
    assert_eq!(
        stdout(&["expand", "ocf", "(1*sqrt(3)-1)/2", "--limit", "4"]),
        "0;2,1,2,…"
    );
}

#[test]
fn expand_periodic_cutting_prefix() {
    // segments of [0; 2, 1h, 2, 1h, …]: J L L, then alternating J R … blocks
    let w = stdout(&["expand", "cutting", "(1*sqrt(3)-1)/2", "--limit", "9"]);
    assert_eq!(w, "JLLJRJLLJ…");
    let a = stdout(&["expand", "annotated", "(1*sqrt(3)-1)/2", "--limit", "6"]);
    assert_eq!(a, "0;2,1h,2,1h,2,…");
}

#[test]
fn golden_outputs() {
    let cases: [(&str, &[&str]); 8] = [
        ("expand_mgcf_0.json", &["expand", "mgcf", "0"]),
        (
            "expand_annotated_sqrt3.json",
            &["expand", "annotated", "(1*sqrt(3)-1)/2", "--limit", "40"],
        ),
        ("block_5_1h_5.json", &["block", "JLLLLLJRJLLLLLJ"]),
        ("block_1_1m_1.json", &["block", "JLLJLLJ"]),
        ("central_2.json", &["central", "2"]),
        ("corners_half.json", &["corners", "--theta", "1/2"]),
        ("corners_surd_13.json", &["corners", "--surd", "13"]),
        (
            "trace_fig.json",
            &["trace", "--geodesic", "-5/2,5/2", "--limit", "5"],
        ),
    ];
    for (file, args) in cases {
        assert_eq!(json(args), golden(file), "{}", file);
    }
}

#[test]
fn block_verdict_schema() {
    for w in ["J", "JJ", "JLLLJRRJ", "JLLLLLJRJLLLLLJ", "RJ"] {
        let v = json(&["block", w]);
        let obj = v.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(|k| k.as_str()).collect();
        keys.sort();
        assert_eq!(keys, ["block", "reason", "status", "witness"]);
        assert_eq!(obj["block"], w);
        let status = obj["status"].as_str().unwrap();
        assert!([
            "admissible",
            "edge-forbidden",
            "whole-forbidden",
            "excluded-initial-only"
        ]
        .contains(&status));
        match &obj["witness"] {
            Value::Null => assert!(obj["reason"].is_string()),
            Value::Object(g) => {
                assert!(g["head"].is_string() && g["foot"].is_string());
                let ends = format!(
                    "{},{}",
                    g["head"].as_str().unwrap(),
                    g["foot"].as_str().unwrap()
                );
                let traced = json(&["trace", "--geodesic", &ends, "--limit", "200"]);
                assert!(
                    traced["cutting"].as_str().unwrap().contains(w),
                    "{} via {}",
                    w,
                    ends
                );
            }
            other => panic!("unexpected witness {}", other),
        }
    }
}

#[test]
fn conversions() {
    assert_eq!(
        stdout(&["convert", "--from", "cutting", "--to", "ocf", "JLLC1LLLLJ"]),
        "0;2,1,4"
    );
    assert_eq!(
        stdout(&[
            "convert",
            "--from",
            "cutting",
            "--to",
            "annotated",
            "JLLC1LLLLJ"
        ]),
        "0;2,1c,4"
    );
    assert_eq!(
        stdout(&["convert", "--from", "ocf", "--to", "cutting", "0;2,1,4"]),
        "JLLC1LLLLJ"
    );
    assert_eq!(
        stdout(&["convert", "--from", "acf", "--to", "farey", "RFRRF"]),
        "RDD"
    );
    assert_eq!(
        stdout(&["convert", "--from", "mgcf", "--to", "cutting", "JL"]),
        "JR"
    );
    assert_eq!(
        stdout(&["convert", "--from", "farey", "--to", "ocf", "RDD"]),
        "1;2"
    );
}

#[test]
fn central_and_corners() {
    let c = json(&["central", "2,2,2,2,2,2"]);
    assert_eq!(c["tail"], serde_json::json!([3, 8, 4]));
    let g = golden("central_2.json");
    let statuses: Vec<&str> = g["words"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["status"].as_str().unwrap())
        .collect();
    assert_eq!(
        statuses.iter().filter(|s| **s == "whole-forbidden").count(),
        2
    );
    assert_eq!(json(&["corners", "--surd", "133"])["corners"], 4);
    assert_eq!(stdout(&["corners", "--theta", "1/3"]), "no corner hits");
}

#[test]
fn forbidden_listing() {
    let v = json(&["forbidden", "--max-len", "13", "--jobs", "2"]);
    let blocks: Vec<&str> = v["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b.as_str().unwrap())
        .collect();
    for b in [
        "JJ", "LR", "RL", "LJLJ", "RJRJ", "JLJL", "JRJR", "LJLLJL", "RJRRJR",
    ] {
        assert!(blocks.contains(&b), "{}", b);
    }
    assert!(blocks.contains(&"LJLLLJLLLLLJL"));
    assert!(v["central_derived"].as_u64().unwrap() >= 4);
}

#[test]
fn trace_writes_svg() {
    let dir = std::env::temp_dir().join(format!("gcf-svg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig.svg");
    let p = path.to_str().unwrap();
    assert_eq!(
        stdout(&[
            "trace",
            "--geodesic",
            "-5/2,5/2",
            "--limit",
            "5",
            "--svg",
            p
        ]),
        "RRJLL…"
    );
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bench_reports() {
    let v = json(&["bench", "100", "--reps", "1"]);
    assert_eq!(v["points"].as_array().unwrap().len(), 3);
    assert!(v["exponent"].is_number());
    assert_eq!(
        v["lookahead"][0]["tags"],
        serde_json::json!(["c", "m", "h"])
    );
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["expand", "ocf", "1/x"]), 2);
    assert_eq!(code(&["block", "JXQ"]), 2);
    assert_eq!(code(&["expand", "bogus", "1/2"]), 2);
    assert_eq!(code(&["expand", "acf", "-1/3"]), 3);
    assert_eq!(code(&["expand", "mgcf", "3/4"]), 3);
    assert_eq!(code(&["bench", "10"]), 3);
    assert_eq!(code(&["forbidden", "--max-len", "100"]), 4);
    assert_eq!(code(&["corners", "--surd", "13", "--limit", "3"]), 4);
}
