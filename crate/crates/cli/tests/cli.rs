use std::io::Write;
use std::process::{Command, Stdio};

use hatcycle_cli::{parse_strategy, run, strategy_json, EXIT_ERROR, EXIT_LOSING, EXIT_WINNING};
use hatcycle_core::{chi2_strategy, chi3_strategy, construct_winning};
use serde_json::Value;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn hatcycle(args: &[&str], stdin: &str) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hatcycle").chain(args.iter().copied());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(text: &str) -> Value {
    serde_json::from_str(text.trim()).unwrap()
}

#[test]
fn construct_then_verify() {
    let built = hatcycle(&["construct", "--n", "9"], "");
    assert_eq!(built.code, EXIT_WINNING);
    let out = hatcycle(&["verify"], &built.stdout);
    assert_eq!(out.code, EXIT_WINNING);
    assert_eq!(out.stdout.trim(), r#"{"verdict":"winning"}"#);
}

#[test]
fn losing_strategy_reports_a_witness() {
    let text = strategy_json(&chi3_strategy(5).unwrap());
    let out = hatcycle(&["verify", "--strategy", "-"], &text);
    assert_eq!(out.code, EXIT_LOSING);
    assert_eq!(
        out.stdout.trim(),
        r#"{"verdict":"losing","witness":{"colours":[0,1,2,0,1]}}"#
    );
}

#[test]
fn strategy_json_round_trips() {
    for f in [
        chi3_strategy(7).unwrap(),
        chi2_strategy(8).unwrap(),
        construct_winning(4).unwrap().unwrap(),
    ] {
        let text = strategy_json(&f);
        assert_eq!(parse_strategy(&text).unwrap(), f);
        let again = hatcycle(
            &["construct", "--n", &f.n().to_string(), "--family", "chi3"],
            "",
        );
        assert_eq!(
            strategy_json(&parse_strategy(&again.stdout).unwrap()),
            again.stdout.trim()
        );
    }
}

#[test]
fn malformed_input_is_an_error() {
    let inputs = [
        "",
        "not json",
        r#"{"n":3}"#,
        r#"{"n":3,"rules":[[[0,0,0],[0,0,0],[0,0,0]]]}"#,
        r#"{"n":3,"rules":[[[0,0,3],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]]]}"#,
        r#"{"n":2,"rules":[[[0,0,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]]]}"#,
        r#"{"n":3,"rules":[],"extra":1}"#,
    ];
    for input in inputs {
        for cmd in ["verify", "count", "classify", "export-dot"] {
            let out = hatcycle(&[cmd], input);
            assert_eq!(out.code, EXIT_ERROR, "{cmd} accepted {input:?}");
            assert!(out.stdout.is_empty());
            assert!(out.stderr.starts_with("error:"));
        }
    }
    let out = hatcycle(&["verify", "--strategy", "/nonexistent/strategy.json"], "");
    assert_eq!(out.code, EXIT_ERROR);
    assert!(out.stderr.contains("/nonexistent/strategy.json"));
}

#[test]
fn usage_errors() {
    assert_eq!(hatcycle(&[], "").code, EXIT_ERROR);
    assert_eq!(hatcycle(&["frobnicate"], "").code, EXIT_ERROR);
    assert_eq!(hatcycle(&["construct"], "").code, EXIT_ERROR);
    assert_eq!(hatcycle(&["construct", "--n", "5"], "").code, EXIT_ERROR);
    assert_eq!(
        hatcycle(&["construct", "--n", "5", "--family", "chi2"], "").code,
        EXIT_ERROR
    );
    assert_eq!(
        hatcycle(&["construct", "--n", "6", "--family", "algebraic"], "").code,
        EXIT_ERROR
    );
    assert_eq!(hatcycle(&["--help"], "").code, EXIT_WINNING);
}

#[test]
fn count_output() {
    let out = hatcycle(&["count"], &strategy_json(&chi3_strategy(5).unwrap()));
    assert_eq!(out.code, EXIT_LOSING);
    assert_eq!(
        out.stdout.trim(),
        r#"{"defeat_count":"3","n":5,"win_probability":"80/81"}"#
    );
    let out = hatcycle(&["count"], &strategy_json(&chi3_strategy(6).unwrap()));
    assert_eq!(out.code, EXIT_WINNING);
    assert_eq!(json(&out.stdout)["win_probability"], "1");
}

#[test]
fn classify_output() {
    let out = hatcycle(&["classify"], &strategy_json(&chi2_strategy(8).unwrap()));
    assert_eq!(out.code, EXIT_WINNING);
    let v = json(&out.stdout);
    assert_eq!(v["balanced"], true);
    assert_eq!(v["chi"]["constant"], 2);
    assert_eq!(v["structure_violations"], 0);
    let colouring = v["colouring"].as_array().unwrap();
    assert_eq!(colouring.len(), 8);
    for boundary in colouring {
        let letters: String = boundary
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r.as_str().unwrap())
            .collect();
        let count = |ch| letters.chars().filter(|&x| x == ch).count();
        assert_eq!((count('Y'), count('R'), count('B')), (2, 2, 5));
    }
    assert_eq!(
        v["ell"][0][0][0],
        serde_json::json!({ "plus": 1, "minus": 3 })
    );

    let zero = r#"{"n":3,"rules":[[[0,0,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]]]}"#;
    let v = json(&hatcycle(&["classify"], zero).stdout);
    assert_eq!(v["balanced"], false);
    assert!(v.get("unbalanced_edge").is_some());
}

#[test]
fn export_dot_output() {
    let text = strategy_json(&chi3_strategy(5).unwrap());
    let a = hatcycle(&["export-dot"], &text);
    let b = hatcycle(&["export-dot"], &text);
    assert_eq!(a.code, EXIT_WINNING);
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<&str> = a.stdout.lines().collect();
    let edges: Vec<&&str> = lines
        .iter()
        .filter(|l| l.contains("v_") && l.contains("->"))
        .collect();
    assert_eq!(edges.len(), 45);
    assert_eq!(edges.iter().filter(|l| l.contains("gold")).count(), 15);
    assert_eq!(edges.iter().filter(|l| l.contains("color=red")).count(), 15);
    assert_eq!(edges.iter().filter(|l| l.contains("dir=none")).count(), 15);
    assert_eq!(
        edges
            .iter()
            .filter(|l| l.contains("constraint=false"))
            .count(),
        9
    );
    assert_eq!(lines.iter().filter(|l| l.contains("rank=same")).count(), 5);
    assert!(a.stdout.starts_with("digraph"));

    let zero = r#"{"n":3,"rules":[[[0,0,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]]]}"#;
    assert_eq!(hatcycle(&["export-dot"], zero).code, EXIT_ERROR);
}

#[test]
fn prove_output() {
    let out = hatcycle(&["prove", "--n", "5"], "");
    assert_eq!(out.code, EXIT_WINNING);
    let v = json(&out.stdout);
    assert_eq!(v["n"], 5);
    assert_eq!(v["conclusion"]["kind"], "no_winning_strategy");
    assert_eq!(hatcycle(&["prove", "--n", "6"], "").code, EXIT_ERROR);
    assert_eq!(hatcycle(&["prove", "--n", "11"], "").code, EXIT_ERROR);
    let out = hatcycle(&["prove", "--n", "7", "--budget", "10"], "");
    assert_eq!(out.code, EXIT_ERROR);
    assert_eq!(json(&out.stdout)["conclusion"]["kind"], "budget_exceeded");
}

#[test]
fn general_output() {
    let dir = std::env::temp_dir().join(format!("hatcycle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let game = dir.join("game.json");
    let strategy = dir.join("strategy.json");
    std::fs::write(
        &game,
        r#"{"vertices":["a","b"],"edges":[["a","b"],["b","a"]],"heights":{"a":2,"b":2}}"#,
    )
    .unwrap();
    std::fs::write(&strategy, r#"{"rules":{"a":[0,1],"b":[1,0]}}"#).unwrap();
    let game = game.to_str().unwrap();

    let out = hatcycle(&["general", "--game", game], "");
    assert_eq!(
        (out.code, out.stdout.trim()),
        (EXIT_WINNING, r#"{"value":1,"winning":true}"#)
    );
    let out = hatcycle(
        &[
            "general",
            "--game",
            game,
            "--strategy",
            strategy.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(
        (out.code, out.stdout.trim()),
        (EXIT_WINNING, r#"{"min_correct":1,"winning":true}"#)
    );
    std::fs::write(&strategy, r#"{"rules":{"a":[0,0],"b":[0,0]}}"#).unwrap();
    let out = hatcycle(
        &[
            "general",
            "--game",
            game,
            "--strategy",
            strategy.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(
        (out.code, out.stdout.trim()),
        (EXIT_LOSING, r#"{"min_correct":0,"winning":false}"#)
    );
    let out = hatcycle(&["general", "--game", game, "--budget", "1"], "");
    assert_eq!(out.code, EXIT_ERROR);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_pipes_construct_into_verify() {
    let bin = env!("CARGO_BIN_EXE_hatcycle");
    let built = Command::new(bin)
        .args(["construct", "--n", "12"])
        .output()
        .unwrap();
    assert_eq!(built.status.code(), Some(EXIT_WINNING));
    let mut child = Command::new(bin)
        .arg("verify")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(&built.stdout)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_WINNING));

    let bad = Command::new(bin)
        .args(["verify", "--strategy", "-"])
        .stdin(Stdio::null())
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_ERROR));

    let budget = Command::new(bin)
        .args(["prove", "--n", "7"])
        .env("HATCYCLE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(budget.status.code(), Some(EXIT_ERROR));
}
