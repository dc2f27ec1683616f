//! Result serialization.

use std::io::Write;
use std::path::Path;

use crate::commands::Outcome;
use crate::error::CliError;

/// Rendered bytes: pretty JSON with a trailing newline, or CSV.
pub fn render(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Record { record, .. } => {
            let mut s = serde_json::to_string_pretty(record).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Outcome::Csv { text, .. } => text.clone(),
    }
}

/// Write to `path`, or stdout when absent.
pub fn write_outputs(outcome: &Outcome, path: Option<&Path>) -> Result<(), CliError> {
    let text = render(outcome);
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_rendering_is_stable() {
        let o = Outcome::Record { record: json!({"b": 1, "a": [1.5, 2]}), pass: true };
        assert_eq!(render(&o), render(&o.clone()));
        assert!(render(&o).ends_with("}\n"));
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let o = Outcome::Csv { text: "x".into(), pass: true };
        let e = write_outputs(&o, Some(Path::new("/nonexistent-dir/x/y.csv"))).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }
}
