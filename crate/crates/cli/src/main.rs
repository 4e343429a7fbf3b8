use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mfcalc_cli::{exit_code, load, run_problem, Overrides, RunOptions};

/// Run the tasks of an mfcalc problem document.
#[derive(Debug, Parser)]
#[command(name = "mfcalc", version)]
struct Args {
    /// Problem document (JSON)
    document: PathBuf,
    /// Seed for tasks that do not set their own
    #[arg(long)]
    seed: Option<u64>,
    /// Degree bound for the graded homology engine and the Jacobian complex
    #[arg(long)]
    degree_bound: Option<i64>,
    /// Trial count for tasks that do not set their own
    #[arg(long)]
    trials: Option<usize>,
    /// Write the JSON report here (`-` for stdout)
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Suppress the text report
    #[arg(long)]
    quiet: bool,
    /// Run independent tasks concurrently; report order is unchanged
    #[arg(long)]
    parallel: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let fail = |msg: String, code: i32| {
        eprintln!("mfcalc: {msg}");
        ExitCode::from(code as u8)
    };
    let problem = match load(&args.document) {
        Ok(p) => p,
        Err(e) => return fail(format!("{}: {e}", args.document.display()), e.exit_code()),
    };
    let opts = RunOptions {
        overrides: Overrides { seed: args.seed, degree_bound: args.degree_bound, trials: args.trials },
        parallel: args.parallel,
    };
    let report = match run_problem(&problem, &opts) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string(), e.exit_code()),
    };
    if !args.quiet {
        print!("{}", report.to_text());
    }
    if let Some(path) = &args.json {
        let text = report.to_json_string();
        if path.as_os_str() == "-" {
            print!("{text}");
        } else if let Err(e) = std::fs::write(path, text) {
            return fail(format!("cannot write {}: {e}", path.display()), 1);
        }
    }
    ExitCode::from(exit_code(&report) as u8)
}
