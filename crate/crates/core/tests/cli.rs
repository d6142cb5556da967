use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const CNL: &str = env!("CARGO_BIN_EXE_cnl");
const ATM: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/atm.txt");

fn cnl(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(CNL)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> (Vec<Value>, Value) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = lines.pop().unwrap()["summary"].clone();
    (lines, summary)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn batch_over_the_corpus() {
    let out = cnl(&["--batch", ATM], "");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (lines, summary) = report(&out);
    assert_eq!(summary["rejections"], 0);
    assert_eq!(summary["lines"], 5);
    assert_eq!(summary["clauses"], 12);
    assert_eq!(lines[1]["output"][0], "[SimpleMat] has a user interface.");
    assert_eq!(lines[2]["output"][0], "Every customer has [an individual] card.");
    assert!(lines.iter().all(|l| l["status"] == "ok"));
}

#[test]
fn bad_line_is_marked_and_the_rest_processed() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "in.txt",
        "SimpleMat is a simple money dispenser.\nCustomer the enters.\nIs SimpleMat a money dispenser?\n",
    );
    let out = cnl(&["--batch", &file], "");
    assert_eq!(out.status.code(), Some(1));
    let (lines, summary) = report(&out);
    assert_eq!(lines[1]["status"], "error");
    assert_eq!(lines[1]["line"], 2);
    assert!(lines[1]["output"][0].as_str().unwrap().contains("token 1"));
    assert_eq!(lines[2]["output"][0], "yes");
    assert_eq!(summary["rejections"], 1);
    assert_eq!(cnl(&["--batch", &file, "--lenient"], "").status.code(), Some(0));
}

#[test]
fn trace_prints_drs_and_clauses() {
    let out = cnl(&["--batch", ATM, "--trace"], "");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("drs: drs([X1,X2], [gender(X1,[m,f,n])"), "{err}");
    assert!(err.contains("clause: card([2,X1]) :- customer(X1)."));
    assert!(err.contains("rule: card([2,X1]), have(X1,[2,X1]) ::- customer(X1)."));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cnl(&["--batch", "/nonexistent/file"], "").status.code(), Some(2));
    assert_eq!(cnl(&["--no-such-flag"], "").status.code(), Some(2));
    assert_eq!(cnl(&["--lexicon", "/nonexistent.lex"], "").status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let kb = write(dir.path(), "bad.kb", "this is not a clause\n");
    assert_eq!(cnl(&["--kb", &kb, "--batch", ATM], "").status.code(), Some(2));
}

#[test]
fn repl_session() {
    let dir = tempfile::tempdir().unwrap();
    let kb = dir.path().join("atm.kb");
    let input = format!(
        "SimpleMat is a simple money dispenser.\nIt has a user interface.\nIs SimpleMat a money dispenser?\n\
         Who is a money dispenser?\n:kb have\n:save {}\n:quit\n",
        kb.display()
    );
    let out = cnl(&[], &input);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("[SimpleMat] has a user interface."));
    assert!(stdout.contains("> yes"), "{stdout}");
    assert!(stdout.contains("[SimpleMat] is a money dispenser."));
    assert!(stdout.contains("have(1,2)."));

    let out = cnl(&["--kb", kb.to_str().unwrap()], "Does SimpleMat have a user interface?\n");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("> yes"), "{stdout}");
}

#[test]
fn repl_offers_unknown_words_and_readings() {
    let input = "SimpleMat is a printer.\nnoun\nIs SimpleMat a printer?\n\
                 SimpleMat serves a customer who has a card and a code.\n2\n:kb code\n";
    let out = cnl(&[], input);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("added noun \"printer\""), "{stdout}");
    assert!(stdout.contains("> yes"));
    assert!(stdout.contains("Reading number"));
    assert!(stdout.contains("Reading number (empty to drop the sentence): SimpleMat serves [[a customer who has [a card]] and [a code]]."), "{stdout}");
    assert!(stdout.contains("code(4)."), "{stdout}");
}

#[test]
fn scenario_with_scripted_replies() {
    let dir = tempfile::tempdir().unwrap();
    let replies = write(dir.path(), "replies.txt", "7\ninserted\nyes\n");
    let file = write(
        dir.path(),
        "scenario.txt",
        "SimpleMat is a simple money dispenser.\nEvery customer has a card.\n\
         :interface enter/2 \"Enter your card\"\n:scenario atm\nThe customer enters the card.\n\
         SimpleMat checks the card.\n:end\n:timeline atm\n:run atm\n",
    );
    let out = cnl(&["--batch", &file, "--script-io", &replies], "");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let (lines, _) = report(&out);
    let run = lines.last().unwrap()["output"].as_array().unwrap();
    let text: Vec<&str> = run.iter().map(|v| v.as_str().unwrap()).collect();
    let enter = text.iter().position(|l| l.contains("enter(")).unwrap();
    let check = text.iter().position(|l| l.contains("check(")).unwrap();
    assert!(enter < check, "{text:?}");
    assert_eq!(text.iter().filter(|l| l.contains("Enter your card")).count(), 1);
    let timeline = lines[lines.len() - 2]["output"].as_array().unwrap();
    assert!(timeline.iter().any(|l| l.as_str().unwrap().contains("precedes(T1,T2)")), "{timeline:?}");
}
