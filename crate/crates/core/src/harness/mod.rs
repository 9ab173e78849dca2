//! Experiment drivers behind the command-line tool. Everything here runs in
//! `f64`.

pub mod counterexample;
pub mod report;
pub mod svg;
pub mod sweep;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Creates `path` and hands a buffered writer to `body`, tagging any I/O
/// failure with the path.
pub fn write_file<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let io_err = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let file = File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    body(&mut out).map_err(io_err)?;
    out.flush().map_err(io_err)
}

/// 17 significant digits.
pub(crate) fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
