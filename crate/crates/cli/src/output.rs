//! Report and plain-text output plumbing.

use std::fs::File;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;

use lexiprec::error::Error;
use lexiprec::report::Report;
use lexiprec::BigRational;

use crate::cli::OutputArgs;
use crate::error::{CliError, CliResult};

/// Writes the report per the output flags: CSV or JSON, to a file or
/// standard output.
pub fn emit(report: &Report, args: &OutputArgs) -> CliResult {
    if args.precision < 1 {
        return Err(CliError::usage("--precision must be at least 1"));
    }
    let format = args.format.to_report();
    match &args.out {
        Some(path) => {
            let mut file = create(path)?;
            report
                .write(&mut file, format, args.precision, args.exact)
                .map_err(|e| CliError::data(format!("{}: {e}", path.display())))
        }
        None => {
            let stdout = std::io::stdout();
            match report.write(&mut stdout.lock(), format, args.precision, args.exact) {
                // A closed pipe (`lexiprec ... | head`) is not an error.
                Err(Error::Io(e)) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
                other => other.map_err(|e| CliError::data(e.to_string())),
            }
        }
    }
}

/// Writes plain text to the destination file or standard output.
pub fn write_text(out: Option<&PathBuf>, text: &str) -> CliResult {
    match out {
        Some(path) => {
            let mut file = create(path)?;
            file.write_all(text.as_bytes())
                .map_err(|e| CliError::data(format!("{}: {e}", path.display())))
        }
        None => {
            let stdout = std::io::stdout();
            match stdout.lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
                other => other.map_err(|e| CliError::data(e.to_string())),
            }
        }
    }
}

pub fn create(path: &Path) -> CliResult<File> {
    File::create(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

/// Renders an exact aggregate the same way cells render: the rational
/// itself in exact mode, a rounded decimal otherwise.
pub fn format_big(value: &BigRational, precision: usize, exact: bool) -> String {
    if exact {
        value.to_string()
    } else {
        format!(
            "{:.precision$}",
            value.to_f64().unwrap_or(f64::NAN)
        )
    }
}
