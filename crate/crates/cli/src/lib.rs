//! Scan driver behind the `faraday` binary: configuration, the five commands
//! and tabular output.

pub mod config;
pub mod error;
pub mod grid;
pub mod run;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};

pub use config::{parse_config_file, Command, Format, RunConfig, Settings};
pub use error::CliError;
pub use run::{run, Outcome, SolveCache};
pub use table::{Cell, Table};

/// Write `table` to the configured destination (stdout when no path is set).
pub fn emit(cfg: &RunConfig, table: &Table) -> Result<(), CliError> {
    let mut out: Box<dyn Write> = match &cfg.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cfg.format {
        Format::Csv => table.write_csv(&mut out)?,
        Format::Json => table.write_json(cfg, &mut out)?,
    }
    out.flush()?;
    Ok(())
}
