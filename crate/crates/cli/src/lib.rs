//! Batch front end: argument parsing, configuration, command dispatch and
//! the exit-code contract (0 pass, 1 numerical failure, 2 usage or
//! configuration error, 3 I/O error).

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;

pub use args::{parse_command, Command, RunConfig};
pub use commands::Outcome;
pub use config::{load_config, SimConfig};
pub use error::CliError;
pub use output::write_outputs;

/// Size the global thread pool from `QDS3_THREADS` when set.
fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("QDS3_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("QDS3_THREADS must be a positive integer, got {v:?}")))?;
    // a pool may already exist when embedded in tests; keep it
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Run the program and return its exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let rc = match parse_command(argv) {
        Ok(rc) => rc,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = configure_threads()
        .and_then(|_| commands::run(&rc.command))
        .and_then(|outcome| write_outputs(&outcome, rc.output_path.as_deref()).map(|_| outcome.pass()));
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("qds3: {e}");
            e.exit_code()
        }
    }
}
