use std::io::{self, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use purelog::cli::{run_goal, run_repl, SessionConfig};

const STACK_BYTES: usize = 1 << 30;

/// A pure Prolog interpreter.
#[derive(Parser, Debug)]
#[command(name = "purelog", version)]
struct Args {
    /// Program files to consult, in order.
    files: Vec<PathBuf>,
    /// Solve GOAL once and exit: 0 on success, 1 on failure, 2 on error.
    #[arg(short = 'g', value_name = "GOAL")]
    goal: Option<String>,
    /// Enable the occur-check in unification.
    #[arg(long)]
    occur_check: bool,
    /// Abort a query after N executed goals.
    #[arg(long, value_name = "N")]
    steps: Option<u64>,
    /// Suppress the banner.
    #[arg(short, long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = SessionConfig {
        files: args.files,
        goal: args.goal,
        occur_check: args.occur_check,
        steps: args.steps,
        quiet: args.quiet,
    };
    // term traversal is recursive; long lists need a deep stack
    let worker = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || match &config.goal {
            Some(goal) => run_goal(&config, goal, &mut io::stdout(), &mut io::stderr()),
            None => {
                let stdin = io::stdin();
                let echo = !stdin.is_terminal();
                run_repl(&config, &mut stdin.lock(), &mut io::stdout(), echo)
            }
        });
    let code = match worker.map(|h| h.join()) {
        Ok(Ok(code)) => code,
        _ => purelog::cli::EXIT_ERROR,
    };
    ExitCode::from(code as u8)
}
