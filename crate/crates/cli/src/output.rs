use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Formats a float for CSV: exponent notation round-trips exactly and is
/// independent of any locale.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

/// Writes CSV lines to the given path, or to stdout when no path is set.
pub fn write_csv(path: Option<&Path>, lines: &[String]) -> CliResult<()> {
    let mut body = lines.join("\n");
    body.push('\n');
    match path {
        Some(path) => fs::write(path, body).map_err(|err| {
            CliError::Io(format!("cannot write {}: {err}", path.display()))
        }),
        None => {
            let stdout = std::io::stdout();
            stdout
                .lock()
                .write_all(body.as_bytes())
                .map_err(|err| CliError::Io(format!("cannot write to stdout: {err}")))
        }
    }
}
