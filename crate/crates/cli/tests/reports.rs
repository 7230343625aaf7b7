use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use rrfilt::config::Config;
use rrfilt_cli::run::{run_session, RunOptions, Summary};
use rrfilt_cli::session::parse_session;
use serde_json::Value;

fn here() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn script(name: &str) -> String {
    std::fs::read_to_string(here().join("examples/scripts").join(name)).unwrap()
}

fn run(text: &str, opts: &RunOptions) -> (String, Vec<Value>, Summary) {
    let session = parse_session(text).unwrap();
    let mut human = Vec::new();
    let mut json = Vec::new();
    let summary = run_session(&session, opts, Some(&mut human), Some(&mut json)).unwrap();
    let lines = String::from_utf8(json)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (String::from_utf8(human).unwrap(), lines, summary)
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(here().join("schema/report.schema.json")).unwrap();
    jsonschema::JSONSchema::compile(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_schema(lines: &[Value]) {
    let s = schema();
    for l in lines {
        if let Err(errors) = s.validate(l) {
            let msgs: Vec<String> = errors
                .map(|e| format!("{e} at {}", e.instance_path))
                .collect();
            panic!("{l}\n{}", msgs.join("\n"));
        }
    }
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path: PathBuf = here().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want =
        std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(actual, want, "output differs from {}", path.display());
}

fn json_text(lines: &[Value]) -> String {
    lines.iter().map(|l| format!("{l}\n")).collect()
}

#[test]
fn quartics_session_matches_golden_output() {
    let (human, lines, summary) = run(&script("quartics.rrs"), &RunOptions::default());
    assert_schema(&lines);
    assert_eq!(summary.errors, 0);
    assert_eq!(lines[1]["result"]["rho"], 2);
    assert_eq!(lines[2]["result"]["depth_G"], 0);
    assert_eq!(lines[2]["result"]["depth_R"], 1);
    golden("quartics.txt", &human);
    golden("quartics.jsonl", &json_text(&lines));
}

#[test]
fn semigroup_session_matches_golden_output() {
    let (human, lines, summary) = run(&script("semigroup.rrs"), &RunOptions::default());
    assert_schema(&lines);
    assert_eq!(summary.errors, 0);
    assert_eq!(lines[2]["result"]["rho"], 3);
    assert_eq!(lines[5]["result"]["verdict"], "HOLDS");
    golden("semigroup.txt", &human);
    golden("semigroup.jsonl", &json_text(&lines));
}

#[test]
fn surface_session_reports_the_vanishing_test() {
    let (_, lines, summary) = run(&script("surface.rrs"), &RunOptions::default());
    assert_schema(&lines);
    assert_eq!(summary.errors, 0);
    let check = &lines[4]["result"];
    assert_eq!(check["verdict"], "FAILS");
    assert_eq!(check["evidence"]["ext3_dim"], 1);
    assert_eq!(check["evidence"]["ext_piece"]["dim_k"], 1);
    let q_star: Vec<&str> = check["evidence"]["q_star_gens"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(q_star, ["z^2", "y*z", "x*z", "y^4 - x^3*w"]);
    assert_eq!(lines[1]["result"]["depth_A"], 2);
    assert_eq!(lines[1]["result"]["depth_G"], 1);
}

#[test]
fn small_power_window_is_inconclusive_not_an_error() {
    let text =
        "ring P = QQ[x, y]; ideal q = 0; ideal I = x^4, x^3*y, x*y^3, y^4; rho(q, I, n_max = 1);";
    let (human, lines, summary) = run(text, &RunOptions::default());
    assert_schema(&lines);
    assert_eq!(lines[0]["status"], "inconclusive");
    assert_eq!(lines[0]["result"]["rho"], "exceeds bound");
    assert_eq!(
        summary,
        Summary {
            commands: 1,
            errors: 0,
            inconclusive: 1
        }
    );
    assert_eq!(summary.exit_code(), 0);
    assert_eq!(lines[1]["summary"]["any_inconclusive"], true);
    assert!(human.contains("rho exceeds 1"), "{human}");
}

#[test]
fn budget_overruns_are_inconclusive() {
    let text = "ring P = QQ[x, y]; ideal q = 0; depth_table(q, 3, power_cap = 2);";
    let (_, lines, summary) = run(text, &RunOptions::default());
    assert_schema(&lines);
    assert_eq!(lines[0]["status"], "inconclusive");
    assert_eq!(summary.inconclusive, 1);
}

#[test]
fn declarations_alone_produce_no_reports() {
    let (human, lines, summary) = run("ring R = QQ[x]; ideal q = x^2;", &RunOptions::default());
    assert!(human.is_empty());
    assert!(lines.is_empty());
    assert_eq!(summary, Summary::default());
}

#[test]
fn failures_are_reported_and_fail_fast_stops() {
    // x alone is not primary to the maximal ideal of the plane
    let text = "ring R = QQ[x, y]; ideal q = 0; ideal I = x;\n\
                depth(q, I); gb(q); check(a_inequality, q);";
    let (_, lines, summary) = run(text, &RunOptions::default());
    assert_schema(&lines);
    assert_eq!(lines[0]["status"], "error");
    assert_eq!(lines[1]["status"], "ok");
    assert_eq!(lines[2]["status"], "error");
    assert_eq!(summary.errors, 2);
    assert_eq!(summary.exit_code(), 1);
    let opts = RunOptions {
        fail_fast: true,
        ..RunOptions::default()
    };
    let (_, lines, summary) = run(text, &opts);
    assert_eq!(summary.commands, 1);
    assert_eq!(lines.len(), 2);
}

#[test]
fn parallel_runs_print_the_same_reports() {
    let quartics = script("quartics.rrs")
        .replace("ideal q", "ideal q2")
        .replace("(q", "(q2")
        .replace(", q", ", q2");
    let text = script("semigroup.rrs") + &quartics;
    let serial = run(&text, &RunOptions::default());
    let parallel = run(
        &text,
        &RunOptions {
            parallel: true,
            ..RunOptions::default()
        },
    );
    assert_eq!(serial.0, parallel.0);
    assert_eq!(serial.1, parallel.1);
}

#[test]
fn seeds_are_recorded_and_outputs_repeat() {
    let text = script("quartics.rrs");
    let opts = RunOptions {
        config: Config {
            seed: 17,
            ..Config::default()
        },
        ..RunOptions::default()
    };
    let a = run(&text, &opts);
    let b = run(&text, &opts);
    assert_eq!(a.1, b.1);
    assert_eq!(a.1[3]["result"]["window"]["seed"], 17);
}

fn binary(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rrfilt"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn exit_codes() {
    let (code, out, err) = binary(&[], "ring R = QQ[x, y];\nideal I = x +;\n");
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("syntax error at 2:14"), "{err}");

    let (code, out, _) = binary(&[], "");
    assert_eq!((code, out.as_str()), (0, ""));

    let (code, _, _) = binary(
        &["-"],
        "ring R = QQ[x, y]; ideal q = y^2 - x^3; check(exactness, q);",
    );
    assert_eq!(code, 1);

    let (code, out, _) = binary(
        &["--json", "-", "--n-max", "1"],
        "ring P = QQ[x, y]; ideal q = 0; ideal I = x^4, x^3*y, x*y^3, y^4; rho(q, I);",
    );
    assert_eq!(code, 0);
    let last: Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    assert_eq!(last["summary"]["inconclusive"], 1);
}

#[test]
fn binary_matches_the_golden_human_output() {
    let path = here().join("examples/scripts/quartics.rrs");
    let (code, out, _) = binary(&[path.to_str().unwrap()], "");
    assert_eq!(code, 0);
    golden("quartics.txt", &out);
}
