//! Library side of the `bosesemi` command: argument types, value parsers,
//! table output and the subcommands themselves.

pub mod args;
pub mod commands;
pub mod error;
pub mod parse;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use args::{Command, Format};
use commands::Report;
pub use error::CliError;

/// Runs one subcommand and writes its output. Warnings go to standard
/// error; a partially failed run still writes its file and then reports
/// [`CliError::Partial`].
pub fn execute(cmd: &Command) -> Result<(), CliError> {
    let common = cmd.common();
    let p = common.params();
    p.validate()?;
    if !p.in_validated_regime() {
        eprintln!("warning: v <= 0 or g > 0 lies outside the validated regime");
    }
    let report: Report = match cmd {
        Command::Spectrum { method, .. } => commands::spectrum(&p, *method)?,
        Command::Sweep { method, sweep, .. } => commands::sweep(&p, *method, sweep)?,
        Command::Density { bins, .. } => commands::density(&p, *bins)?,
        Command::Wavefunction { method, state, .. } => commands::wavefunction(&p, *method, *state)?,
        Command::Portrait { grid, .. } => commands::portrait(&p, *grid)?,
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let mut out: Box<dyn Write> = match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match common.format {
        Format::Csv => report.table.write_csv(&mut out)?,
        Format::Json => report.table.write_json(&cmd.config(), &mut out)?,
    }
    out.flush()?;
    if report.failed > 0 {
        return Err(CliError::Partial {
            failed: report.failed,
            total: report.total,
        });
    }
    Ok(())
}

/// Caps the global thread pool from `BOSESEMI_THREADS`, if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("BOSESEMI_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("BOSESEMI_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}
