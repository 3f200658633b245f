mod spec;
mod tasks;

use clap::{Parser, Subcommand};
use spec::{RunArgs, TaskSpec};
use std::path::Path;
use std::process::ExitCode;
use tasks::{run_task, Status, TaskError};

/// Exact semisimplification pipelines.
///
/// Exit codes: 0 all checks pass, 1 malformed input, 2 a verified
/// mathematical check failed, 3 a budget was exceeded or a search was
/// undecided.
#[derive(Parser, Debug)]
#[command(name = "ssimp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one task.
    Run(RunArgs),
}

fn write_file(path: &Path, text: &str) -> Result<(), TaskError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| TaskError {
            code: 1,
            message: format!("{}: {e}", dir.display()),
        })?;
    }
    std::fs::write(path, text).map_err(|e| TaskError {
        code: 1,
        message: format!("{}: {e}", path.display()),
    })
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serializes");
    s.push('\n');
    s
}

fn execute(args: RunArgs) -> Result<Status, TaskError> {
    let mut spec = TaskSpec::default();
    if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path).map_err(|e| TaskError {
            code: 1,
            message: format!("{}: {e}", path.display()),
        })?;
        spec = serde_json::from_str(&text).map_err(|e| TaskError {
            code: 1,
            message: format!("{}: {e}", path.display()),
        })?;
    }
    let spec = spec.merge(args.params);
    spec.resolved_seed()
        .map_err(|message| TaskError { code: 1, message })?;
    let outcome = run_task(args.task, &spec)?;
    let text = pretty(&outcome.artifact);
    print!("{text}");
    if let Some(path) = &args.out {
        write_file(path, &text)?;
    }
    if let Some(path) = &args.report {
        write_file(path, &outcome.report)?;
    }
    if let (Some(path), Some(run)) = (&args.run_out, &outcome.run) {
        write_file(path, &pretty(run))?;
    }
    if outcome.status != Status::Pass {
        eprintln!(
            "ssimp: {}",
            outcome.note.unwrap_or_else(|| "check did not pass".into())
        );
    }
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run(args) => match execute(args) {
            Ok(status) => ExitCode::from(status.code() as u8),
            Err(e) => {
                eprintln!("ssimp: {}", e.message);
                ExitCode::from(e.code as u8)
            }
        },
    }
}
