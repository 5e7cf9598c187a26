use std::path::{Path, PathBuf};
use std::process::Command;

use hammology::separation::separate_pair_with;
use hammology::StringSet;
use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE: &str = "12244131\n22223443\n32143431\n14443214\n22134222\n";
/// The example with positions permuted by (1 8)(2 5).
const PERMUTED: &str = "14242131\n33222442\n13142433\n43444211\n24132222\n";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        assert_eq!(self.code, 0, "stderr: {}", self.stderr);
        serde_json::from_str(&self.stdout).expect("stdout is JSON")
    }
}

fn hammology(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_hammology")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn bars(result: &Value, dim: u64) -> Vec<(String, String)> {
    result["barcodes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|g| g["dim"] == dim)
        .flat_map(|g| g["bars"].as_array().unwrap())
        .map(|b| (b["birth"].as_str().unwrap().to_string(), b["death"].as_str().unwrap().to_string()))
        .collect()
}

fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
    list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

#[test]
fn barcode_of_the_example_set() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "a.txt", EXAMPLE);
    let doc = hammology(&["barcode", s(&input), "--mode", "discrete"]).json();
    assert_eq!(doc["command"], "barcode");
    let result = &doc["result"];
    assert_eq!(result["table"].as_array().unwrap().len(), 31);
    let levels: Vec<&str> = result["levels"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(levels, ["0", "2", "3", "4", "5"]);
    assert_eq!(bars(result, 0), pairs(&[("0", "2"), ("0", "3"), ("0", "3"), ("0", "3"), ("0", "inf")]));
    assert_eq!(bars(result, 1), pairs(&[("3", "4")]));
}

#[test]
fn empty_file_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "empty.txt", "");
    let run = hammology(&["barcode", s(&input)]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("no strings"), "{}", run.stderr);
}

#[test]
fn parse_errors_report_line_and_column() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "bad.txt", "1224\n12x4\n");
    let run = hammology(&["barcode", s(&input)]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("bad.txt:2:3:"), "{}", run.stderr);
}

#[test]
fn singleton_has_one_infinite_bar() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "one.txt", "1212\n");
    let result = hammology(&["barcode", s(&input)]).json()["result"].clone();
    assert_eq!(bars(&result, 0), pairs(&[("0", "inf")]));
    assert_eq!(result["barcodes"].as_array().unwrap().len(), 1);
}

#[test]
fn radius_of_an_edge() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "a.txt", EXAMPLE);
    for simplex in ["s1,s3", "1,3"] {
        let doc = hammology(&["radius", s(&input), "--simplex", simplex, "--mode", "discrete"]).json();
        assert_eq!(doc["result"]["radius"], "2");
    }
    let run = hammology(&["radius", s(&input), "--simplex", "s1,s9"]);
    assert_eq!(run.code, 2);
}

#[test]
fn isomorphism_kinds_differ() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "s1.txt", "11113\n22223\n33333\n");
    let b = file(&dir, "s2.txt", "11113\n22223\n33122\n");
    let doc = hammology(&["iso", s(&a), s(&b), "--kind", "filtration"]).json();
    assert_eq!(doc["result"]["bijection"], serde_json::json!([1, 2, 3]));
    let doc = hammology(&["iso", s(&a), s(&b), "--kind", "hamming"]).json();
    assert_eq!(doc["result"]["bijection"], "none");
}

#[test]
fn hausdorff_between_files() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", "1111\n2222\n");
    let b = file(&dir, "b.txt", "1112\n2222\n");
    let doc = hammology(&["hausdorff", s(&a), s(&b)]).json();
    assert_eq!(doc["result"]["hausdorff"], "1");
}

fn weights_sum_to_one(result: &Value) {
    let total = result["weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w.as_str().unwrap().parse::<hammology::Rational>().unwrap())
        .fold(hammology::Rational::zero(), |acc, w| acc + w);
    assert_eq!(total, hammology::Rational::from(1));
}

#[test]
fn dnew_of_identical_and_permuted_files() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", EXAMPLE);
    let b = file(&dir, "b.txt", EXAMPLE);
    let c = file(&dir, "c.txt", PERMUTED);
    for other in [&b, &c] {
        let doc = hammology(&["dnew", s(&a), s(other)]).json();
        assert_eq!(doc["result"]["d_new"], "0");
        weights_sum_to_one(&doc["result"]);
        assert!(doc["config"]["epsilon"].is_string());
        assert!(doc["result"]["separation"]["union"]["steps"].is_array());
    }
}

#[test]
fn dnew_rejects_mismatched_sizes() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", "1111\n2222\n");
    let b = file(&dir, "b.txt", "1111\n2222\n1212\n");
    assert_eq!(hammology(&["dnew", s(&a), s(&b)]).code, 2);
}

#[test]
fn caps_are_enforced() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", EXAMPLE);
    let run = hammology(&["barcode", s(&a), "--max-set-size", "4"]);
    assert_eq!(run.code, 3, "{}", run.stderr);
    let run = hammology(&["barcode", s(&a), "--max-set-size", "30"]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("--i-know"));
    hammology(&["barcode", s(&a), "--max-set-size", "30", "--i-know"]).json();
}

#[test]
fn separation_trace_replays_exactly() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", EXAMPLE);
    let doc = hammology(&["separate", s(&a)]).json();
    let sep = &doc["result"]["separation"];
    let mut set = StringSet::from_digit_strings(4, &["12244131", "22223443", "32143431", "14443214", "22134222"]).unwrap();
    for step in sep["steps"].as_array().unwrap() {
        let z = step["z"].as_u64().unwrap() as usize;
        let j = step["j_exponent"].as_u64().unwrap() as u32;
        set = separate_pair_with(&set, z, j).unwrap();
    }
    let replayed = serde_json::to_value(
        set.elements()
            .iter()
            .map(|g| {
                (0..g.len())
                    .map(|i| g.support(i).map(|c| (c.to_string(), Value::from(g.weight(i, c).to_string()))).collect::<serde_json::Map<_, _>>())
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let emitted: Vec<Value> = sep["separated"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| match v {
            Value::String(digits) => Value::Array(digits.chars().map(|c| serde_json::json!({ c.to_string(): "1" })).collect()),
            other => other.clone(),
        })
        .collect();
    assert_eq!(replayed, Value::Array(emitted));
}

#[test]
fn svg_is_deterministic_and_grouped() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", EXAMPLE);
    let (p, q) = (dir.path().join("p.svg"), dir.path().join("q.svg"));
    hammology(&["barcode", s(&a), "--svg", s(&p)]).json();
    hammology(&["barcode", s(&a), "--svg", s(&q)]).json();
    let (x, y) = (std::fs::read(&p).unwrap(), std::fs::read(&q).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert_eq!(text.matches(r#"stroke-width="3""#).count(), 6);
    assert!(text.contains(">H0<") && text.contains(">H1<") && !text.contains(">H2<"));
}

#[test]
fn output_flag_writes_the_document() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", "1111\n2222\n");
    let out = dir.path().join("out.json");
    let run = hammology(&["barcode", s(&a), "--output", s(&out)]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["command"], "barcode");
}

#[test]
fn echoed_inputs_parse_back_to_the_same_result() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", EXAMPLE);
    let first = hammology(&["barcode", s(&a)]).json();
    let echoed = file(&dir, "echo.json", &first["inputs"][0].to_string());
    let second = hammology(&["barcode", s(&echoed)]).json();
    assert_eq!(first["inputs"], second["inputs"]);
    assert_eq!(first["result"], second["result"]);
}

#[test]
fn emitted_rationals_are_reduced() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.txt", "111112\n111113\n222221\n333331\n");
    let doc = hammology(&["separate", s(&a)]).json();
    fn walk(v: &Value, out: &mut Vec<String>) {
        match v {
            Value::String(t) if t.contains('/') => out.push(t.clone()),
            Value::Array(xs) => xs.iter().for_each(|x| walk(x, out)),
            Value::Object(m) => m.values().for_each(|x| walk(x, out)),
            _ => {}
        }
    }
    let mut found = Vec::new();
    walk(&doc, &mut found);
    assert!(!found.is_empty());
    for t in found {
        let (p, q) = t.split_once('/').unwrap();
        let (p, q): (i128, i128) = (p.parse().unwrap(), q.parse().unwrap());
        let gcd = (1..=p.abs().min(q)).rev().find(|d| p % d == 0 && q % d == 0).unwrap();
        assert!(q > 1 && gcd == 1, "{t}");
    }
}
