//! Batch and interactive front ends.

use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use crate::engine::Machine;
use crate::error::PrologError;
use crate::syntax::{tokenize, TokenKind};

/// Exit code: the goal succeeded.
pub const EXIT_SUCCESS: i32 = 0;
/// Exit code: the goal failed.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code: an error was raised, or a file could not be read.
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SessionConfig {
    pub files: Vec<PathBuf>,
    /// Batch mode: solve this goal once and exit.
    pub goal: Option<String>,
    pub occur_check: bool,
    /// Per-query limit on executed goals.
    pub steps: Option<u64>,
    pub quiet: bool,
}

fn error_line(e: &PrologError) -> String {
    format!("Error: {}", e)
}

/// Builds a machine and consults the configured files. Problems in a file
/// are reported on `err`; `Err` is returned only when a file cannot be read.
pub fn load(config: &SessionConfig, err: &mut dyn Write) -> io::Result<Machine> {
    let mut machine = Machine::new();
    machine.set_occur_check(config.occur_check);
    machine.set_step_limit(config.steps);
    for path in &config.files {
        let report = machine.consult_file(path).map_err(|e| {
            io::Error::new(e.kind(), format!("{}: {}", path.display(), e))
        })?;
        for e in &report.errors {
            writeln!(err, "{}: {}", path.display(), error_line(e))?;
        }
        for w in &report.warnings {
            writeln!(err, "{}: Warning: {}", path.display(), w)?;
        }
    }
    Ok(machine)
}

/// Solves `goal` once. Prints the bindings of the first solution, one
/// `Name = term` per line, or `yes`/`no`.
pub fn run_goal(config: &SessionConfig, goal: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut machine = match load(config, err) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "Error: {}", e);
            return EXIT_ERROR;
        }
    };
    let ops = machine.ops().clone();
    let first = machine.query(goal).map(|mut s| s.next());
    let result = match first {
        Err(e) | Ok(Some(Err(e))) => {
            let _ = writeln!(err, "{}", error_line(&e));
            return EXIT_ERROR;
        }
        Ok(None) => {
            let _ = writeln!(out, "no");
            EXIT_FAILURE
        }
        Ok(Some(Ok(solution))) => {
            let lines = solution.lines(&ops);
            if lines.is_empty() {
                let _ = writeln!(out, "yes");
            }
            for line in lines {
                let _ = writeln!(out, "{}", line);
            }
            EXIT_SUCCESS
        }
    };
    let _ = out.flush();
    result
}

/// Whether `text` holds a complete clause: it ends with a full stop.
fn query_complete(text: &str) -> bool {
    match tokenize(text) {
        Ok(tokens) => tokens.last().is_some_and(|t| t.kind == TokenKind::End),
        // a lexical error will not go away by reading more, unless it is an
        // open quote or comment
        Err(e) => !e.message.starts_with("unterminated"),
    }
}

/// The interactive loop. With `echo`, the `;` answers read from `input`
/// are copied to `out` so that non-terminal transcripts stay readable.
pub fn run_repl(config: &SessionConfig, input: &mut dyn BufRead, out: &mut dyn Write, echo: bool) -> i32 {
    let mut machine = match load(config, out) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(out, "Error: {}", e);
            return EXIT_ERROR;
        }
    };
    match repl_loop(&mut machine, input, out, echo, config.quiet) {
        Ok(()) => EXIT_SUCCESS,
        Err(_) => EXIT_ERROR,
    }
}

fn read_line(input: &mut dyn BufRead) -> io::Result<Option<String>> {
    let mut line = String::new();
    if input.read_line(&mut line)? == 0 {
        return Ok(None);
    }
    Ok(Some(line))
}

fn repl_loop(machine: &mut Machine, input: &mut dyn BufRead, out: &mut dyn Write, echo: bool, quiet: bool) -> io::Result<()> {
    if !quiet {
        writeln!(
            out,
            "purelog {}. End queries with '.'; type ';' for more answers.",
            env!("CARGO_PKG_VERSION")
        )?;
    }
    let mut buffer = String::new();
    loop {
        write!(out, "{}", if buffer.is_empty() { "?- " } else { "|    " })?;
        out.flush()?;
        let Some(line) = read_line(input)? else {
            writeln!(out)?;
            return Ok(());
        };
        buffer.push_str(&line);
        if buffer.trim().is_empty() {
            buffer.clear();
            continue;
        }
        if !query_complete(&buffer) {
            continue;
        }
        let text = std::mem::take(&mut buffer);
        if text.trim() == "halt." {
            return Ok(());
        }
        run_query(machine, &text, input, out, echo)?;
    }
}

fn run_query(machine: &mut Machine, text: &str, input: &mut dyn BufRead, out: &mut dyn Write, echo: bool) -> io::Result<()> {
    let ops = machine.ops().clone();
    let mut solutions = match machine.query(text) {
        Ok(s) => s,
        Err(e) => return writeln!(out, "{}", error_line(&e)),
    };
    // semicolons typed ahead on one line, e.g. `;;;`
    let mut pending = 0usize;
    loop {
        match solutions.next() {
            None => return writeln!(out, "no"),
            Some(Err(e)) => return writeln!(out, "{}", error_line(&e)),
            Some(Ok(solution)) => {
                let lines = solution.lines(&ops);
                if lines.is_empty() {
                    return writeln!(out, "yes");
                }
                write!(out, "{}", lines.join("\n"))?;
                if pending == 0 {
                    write!(out, " ")?;
                    out.flush()?;
                    let answer = read_line(input)?.unwrap_or_default();
                    pending = answer.trim().chars().take_while(|c| *c == ';').count();
                    if pending == 0 {
                        if echo {
                            writeln!(out)?;
                        }
                        return Ok(());
                    }
                    if echo {
                        writeln!(out, ";")?;
                    }
                } else {
                    writeln!(out, " ;")?;
                }
                pending -= 1;
            }
        }
    }
}
