//! Replays REPL transcripts from tests/golden/ and compares the session
//! output line by line.

mod common;

use std::path::{Path, PathBuf};

use common::{corpus, norm};
use purelog::cli::{run_repl, SessionConfig};

struct Exchange {
    query: String,
    expected: Vec<String>,
}

fn parse_transcript(text: &str) -> (Vec<PathBuf>, Vec<Exchange>) {
    let mut files = Vec::new();
    let mut exchanges: Vec<Exchange> = Vec::new();
    for line in text.lines() {
        if let Some(list) = line.strip_prefix("% files:") {
            files.extend(list.split_whitespace().map(corpus));
        } else if let Some(q) = line.strip_prefix("?-") {
            exchanges.push(Exchange {
                query: q.trim().to_string(),
                expected: Vec::new(),
            });
        } else if !line.trim().is_empty() {
            exchanges.last_mut().expect("answer before any query").expected.push(line.to_string());
        }
    }
    (files, exchanges)
}

/// What a user would type: the query, then `;` for every answer marked as
/// continued, and a bare return to accept a final answer.
fn user_input(exchanges: &[Exchange]) -> String {
    let mut input = String::new();
    for ex in exchanges {
        input.push_str(&ex.query);
        input.push('\n');
        for line in &ex.expected {
            if line.trim_end().ends_with(';') {
                input.push_str(";\n");
            }
        }
        let last = ex.expected.last().map(|s| s.trim()).unwrap_or("");
        let closed = last == "yes" || last == "no" || last.starts_with("Error:") || last.ends_with(';');
        if !closed {
            input.push('\n');
        }
    }
    input
}

/// Error lines are compared by kind only; the rest ignoring layout and
/// trailing commas between bindings.
fn comparable(line: &str) -> String {
    let line = line.trim();
    if let Some(rest) = line.strip_prefix("Error:") {
        let kind = rest.trim().split(':').next().unwrap_or("");
        return format!("Error:{}", kind.trim());
    }
    norm(line.trim_end_matches(';').trim_end().trim_end_matches(','))
}

fn session_lines(output: &str) -> Vec<String> {
    output
        .lines()
        .map(|l| {
            let mut l = l;
            while let Some(rest) = l.strip_prefix("?- ") {
                l = rest;
            }
            l.trim().to_string()
        })
        .filter(|l| !l.is_empty() && l != "?-")
        .collect()
}

fn replay(path: &Path) {
    let text = std::fs::read_to_string(path).unwrap();
    let (files, exchanges) = parse_transcript(&text);
    let config = SessionConfig {
        files,
        quiet: true,
        ..SessionConfig::default()
    };
    let input = user_input(&exchanges);
    let mut out = Vec::new();
    let code = run_repl(&config, &mut input.as_bytes(), &mut out, true);
    assert_eq!(code, 0);
    let output = String::from_utf8(out).unwrap();
    let got: Vec<String> = session_lines(&output).iter().map(|l| comparable(l)).collect();
    let expected: Vec<String> = exchanges
        .iter()
        .flat_map(|e| e.expected.iter().map(|l| comparable(l)))
        .collect();
    assert_eq!(got, expected, "{}\n--- session ---\n{}", path.display(), output);
}

fn golden(name: &str) {
    replay(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name));
}

#[test]
fn append_transcript() {
    golden("append.txt");
}

#[test]
fn member_transcript() {
    golden("member.txt");
}

#[test]
fn arithmetic_transcript() {
    golden("arithmetic.txt");
}

#[test]
fn quicksort_transcript() {
    golden("quicksort.txt");
}

#[test]
fn length_transcripts() {
    golden("length.txt");
    golden("length_bad.txt");
}

#[test]
fn difference_list_transcript() {
    golden("append_dl.txt");
}

#[test]
fn negation_transcript() {
    golden("negation.txt");
}

#[test]
fn meta_programming_transcript() {
    golden("meta.txt");
}

#[test]
fn meta_variable_transcript() {
    golden("ambivalent.txt");
}

#[test]
fn every_transcript_has_a_test() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    let source = include_str!("golden.rs");
    for n in names {
        assert!(source.contains(&format!("\"{}\"", n)), "{} is not replayed", n);
    }
}

#[test]
fn typed_ahead_semicolons_answer_several_times() {
    let config = SessionConfig {
        files: vec![corpus("member.pl")],
        quiet: true,
        ..SessionConfig::default()
    };
    let mut out = Vec::new();
    run_repl(&config, &mut "member(X, [a,b,c]).\n;;;\n".as_bytes(), &mut out, true);
    let got = session_lines(&String::from_utf8(out).unwrap());
    assert_eq!(got, ["X = a ;", "X = b ;", "X = c ;", "no"]);
}

#[test]
fn multi_line_query_and_halt() {
    let config = SessionConfig {
        files: vec![corpus("append.pl")],
        quiet: true,
        ..SessionConfig::default()
    };
    let mut out = Vec::new();
    let input = "append(X,\n  [b], [a,b]).\n\nhalt.\nappend(X, Y, Z).\n";
    assert_eq!(run_repl(&config, &mut input.as_bytes(), &mut out, true), 0);
    let output = String::from_utf8(out).unwrap();
    assert!(output.contains("|    "));
    assert_eq!(session_lines(&output), ["|    X = [a]"]);
}

#[test]
fn banner_unless_quiet() {
    let mut out = Vec::new();
    run_repl(&SessionConfig::default(), &mut "".as_bytes(), &mut out, true);
    assert!(String::from_utf8(out).unwrap().starts_with("purelog "));
}
