//! End-to-end checks of the command-line surface: exit codes, JSON output
//! against the shipped schema, DOT emission round-tripping, and the
//! run/query verbs.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use strylus::automaton::Dfa;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_strylus"));
    cmd.env_remove("STRYLUS_ALPHABET");
    cmd
}

fn examples(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn analyze_branch_json_matches_the_documented_rendering() {
    let out = bin()
        .args(["analyze"])
        .arg(examples("branch.imp"))
        .args(["--emit", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let exit_point = report["points"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["label"] == "exit")
        .unwrap();
    assert_eq!(
        serde_json::to_string(&exit_point["vars"]["x"]).unwrap(),
        r#"{"int":null,"bool":["true"],"string":{"kind":"finite","words":["42"]},"nan":false}"#
    );
}

#[test]
fn analyze_output_validates_against_the_schema() {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schema.json");
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    for example in ["branch.imp", "loop_a.imp", "fig1.imp", "coerce.imp"] {
        let out = bin()
            .args(["analyze"])
            .arg(examples(example))
            .args(["--emit", "json", "--widen-n", "1"])
            .output()
            .unwrap();
        assert!(out.status.success(), "{example} failed");
        let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
        let mut errors = Vec::new();
        validate(&schema, &schema, &report, example, &mut errors);
        assert!(errors.is_empty(), "{example}: {errors:?}");
    }
}

/// A minimal JSON-schema checker covering the subset the shipped schema
/// uses: type, required, properties, additionalProperties, items,
/// minItems/maxItems, enum, oneOf, $ref into #/definitions.
fn validate(root: &Value, schema: &Value, value: &Value, path: &str, errors: &mut Vec<String>) {
    if let Some(reference) = schema.get("$ref").and_then(Value::as_str) {
        let name = reference.trim_start_matches("#/definitions/");
        let target = &root["definitions"][name];
        validate(root, target, value, path, errors);
        return;
    }
    if let Some(variants) = schema.get("oneOf").and_then(Value::as_array) {
        let matched = variants.iter().any(|variant| {
            let mut sub = Vec::new();
            validate(root, variant, value, path, &mut sub);
            sub.is_empty()
        });
        if !matched {
            errors.push(format!("{path}: no oneOf variant matched"));
        }
        return;
    }
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(value) {
            errors.push(format!("{path}: {value} not in enum"));
        }
        return;
    }
    if let Some(ty) = schema.get("type").and_then(Value::as_str) {
        let ok = match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "integer" => value.is_i64() || value.is_u64(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            other => {
                errors.push(format!("{path}: unknown schema type {other}"));
                return;
            }
        };
        if !ok {
            errors.push(format!("{path}: expected {ty}, got {value}"));
            return;
        }
    }
    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        for key in required {
            let key = key.as_str().unwrap();
            if value.get(key).is_none() {
                errors.push(format!("{path}: missing required key {key}"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        for (key, sub) in props {
            if let Some(v) = value.get(key) {
                validate(root, sub, v, &format!("{path}.{key}"), errors);
            }
        }
    }
    if let Some(additional) = schema.get("additionalProperties") {
        if additional.is_object() {
            if let Some(obj) = value.as_object() {
                for (key, v) in obj {
                    validate(root, additional, v, &format!("{path}.{key}"), errors);
                }
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            if let Some(min) = schema.get("minItems").and_then(Value::as_u64) {
                if (arr.len() as u64) < min {
                    errors.push(format!("{path}: fewer than {min} items"));
                }
            }
            if let Some(max) = schema.get("maxItems").and_then(Value::as_u64) {
                if (arr.len() as u64) > max {
                    errors.push(format!("{path}: more than {max} items"));
                }
            }
            for (k, v) in arr.iter().enumerate() {
                validate(root, items, v, &format!("{path}[{k}]"), errors);
            }
        }
    }
}

#[test]
fn exit_codes() {
    // missing file is a configuration error
    let out = bin().args(["analyze", "no_such_file.imp"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // parse errors exit 1
    let dir = tempdir();
    let bad = dir.join("bad.imp");
    std::fs::write(&bad, "x = ;").unwrap();
    let out = bin().args(["analyze"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // bad alphabet spec is a configuration error
    let out = bin()
        .args(["analyze"])
        .arg(examples("branch.imp"))
        .args(["--alphabet", "unicode"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // unbound identifier at run time exits 3
    let out = bin().args(["run"]).arg(examples("branch.imp")).output().unwrap();
    assert_eq!(out.status.code(), Some(3));

    // diverging loop exits 4
    let diverge = dir.join("diverge.imp");
    std::fs::write(&diverge, "while (1) { x = 1; }").unwrap();
    let out = bin()
        .args(["run"])
        .arg(&diverge)
        .args(["--budget", "5000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));

    // queries on unknown variables or labels are configuration errors
    let out = bin()
        .args(["query"])
        .arg(examples("branch.imp"))
        .args(["--var", "zz", "--at", "exit", "--empty"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["query"])
        .arg(examples("branch.imp"))
        .args(["--var", "x", "--at", "L99", "--empty"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // pattern syntax errors are configuration errors
    let out = bin()
        .args(["query"])
        .arg(examples("branch.imp"))
        .args(["--var", "x", "--at", "exit", "--intersects", "(unclosed"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_with_inline_and_file_inits() {
    let out = bin()
        .args(["run"])
        .arg(examples("branch.imp"))
        .args(["--init", "y=1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("x = \"42\""));

    let out = bin()
        .args(["run"])
        .arg(examples("branch.imp"))
        .args(["--init", "y=9"])
        .output()
        .unwrap();
    assert!(stdout(&out).contains("x = true"));

    let dir = tempdir();
    let init = dir.join("init.txt");
    std::fs::write(&init, "y = 1\n# comment\n").unwrap();
    let out = bin()
        .args(["run"])
        .arg(examples("branch.imp"))
        .arg("--init")
        .arg(&init)
        .output()
        .unwrap();
    assert!(stdout(&out).contains("x = \"42\""));
}

#[test]
fn query_verbs() {
    let loop_a = examples("loop_a.imp");
    let cases: Vec<(&[&str], &str)> = vec![
        (&["--intersects", "aaa"], "true"),
        (&["--intersects", "b+"], "false"),
        (&["--subset-of", "a*"], "true"),
        (&["--subset-of", "a+"], "false"),
        (&["--empty"], "false"),
        (&["--length"], "[0,+inf]"),
    ];
    for (args, expected) in cases {
        let out = bin()
            .args(["query"])
            .arg(&loop_a)
            .args(["--widen-n", "1", "--var", "str", "--at", "exit"])
            .args(args)
            .output()
            .unwrap();
        assert!(out.status.success());
        assert_eq!(stdout(&out).trim(), expected, "query {args:?}");
    }
}

#[test]
fn dot_emission_round_trips() {
    let dir = tempdir();
    let out = bin()
        .current_dir(&dir)
        .args(["analyze"])
        .arg(examples("loop_a.imp"))
        .args(["--widen-n", "1", "--dot", "str@exit"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let dot = std::fs::read_to_string(dir.join("str_exit.dot")).unwrap();
    let parsed = parse_dot(&dot);
    let sigma = common::sigma();
    let expected = Dfa::from_parts(&sigma, 1, &[(0, 'a', 0)], 0, &[0]).unwrap();
    assert_eq!(parsed, expected);
}

/// Reads back the DOT format emitted by `Dfa::to_dot`.
fn parse_dot(text: &str) -> Dfa {
    let mut finals = Vec::new();
    let mut edges = Vec::new();
    let mut max_state = 0usize;
    for line in text.lines() {
        let line = line.trim().trim_end_matches(';');
        if let Some(rest) = line.strip_prefix('q') {
            if !line.contains("->") {
                if let Some((state, attrs)) = rest.split_once(" [") {
                    let q: usize = state.parse().unwrap();
                    max_state = max_state.max(q);
                    if attrs.contains("doublecircle") {
                        finals.push(q);
                    }
                }
            }
        }
        if line.starts_with('q') && line.contains("->") {
            let (from, rest) = line.split_once("->").unwrap();
            let from: usize = from.trim().trim_start_matches('q').parse().unwrap();
            let (to, label) = rest.split_once('[').unwrap();
            let to: usize = to.trim().trim_start_matches('q').parse().unwrap();
            let label = label
                .trim_start_matches("label=\"")
                .trim_end_matches("\"]");
            let mut symbols = Vec::new();
            let mut chars = label.chars().peekable();
            while let Some(c) = chars.next() {
                match c {
                    ',' => {}
                    '\\' => symbols.push(chars.next().unwrap()),
                    other => symbols.push(other),
                }
            }
            for c in symbols {
                edges.push((from, c, to));
            }
            max_state = max_state.max(from).max(to);
        }
    }
    Dfa::from_parts(&common::sigma(), max_state + 1, &edges, 0, &finals).unwrap()
}

#[test]
fn alphabet_env_var_overrides_the_flag() {
    let dir = tempdir();
    let alphabet_file = dir.join("tiny.txt");
    // a tiny alphabet missing the digits: rejected at config time
    std::fs::write(&alphabet_file, "ab").unwrap();
    let out = bin()
        .env("STRYLUS_ALPHABET", format!("file:{}", alphabet_file.display()))
        .args(["analyze"])
        .arg(examples("branch.imp"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // a file alphabet with the required symbols works
    let full = dir.join("full.txt");
    let symbols: String = (' '..='~').collect();
    std::fs::write(&full, symbols).unwrap();
    let out = bin()
        .env("STRYLUS_ALPHABET", format!("file:{}", full.display()))
        .args(["analyze"])
        .arg(examples("branch.imp"))
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn fig1_queries_match_the_analysis_story() {
    let fig1 = examples("fig1.imp");
    let out = bin()
        .args(["query"])
        .arg(&fig1)
        .args([
            "--widen-n",
            "1",
            "--var",
            "d",
            "--at",
            "eval1",
            "--intersects",
            "[a-z]+=new ActiveXObject\\(.*\\)",
        ])
        .output()
        .unwrap();
    assert_eq!(stdout(&out).trim(), "true");
    let out = bin()
        .args(["query"])
        .arg(&fig1)
        .args(["--widen-n", "1", "--var", "d", "--at", "eval1", "--intersects", "eval"])
        .output()
        .unwrap();
    assert_eq!(stdout(&out).trim(), "false");
}

#[test]
fn text_output_lists_labels_in_order() {
    let out = bin()
        .args(["analyze"])
        .arg(examples("coerce.imp"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let l1 = text.find("L1 ").unwrap();
    let l2 = text.find("L2 ").unwrap();
    let exit = text.find("exit:").unwrap();
    assert!(l1 < l2 && l2 < exit);
}

/// A fresh temporary directory per test invocation.
fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "strylus-test-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
