//! File formats: problem instances (plain text), unfolded-layer parameters
//! (JSON), and the atomic-write helper every writer goes through.

mod instance;
mod params;

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

pub use instance::{parse_instance, read_instance, render_instance, write_instance};
pub use params::{
    load_layer_params, parse_layer_params, render_layer_params, save_layer_params, LoadSummary,
    LoadedModel, LAYER_PARAMS_SCHEMA,
};

use crate::error::{Error, Result};

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failed write never leaves a partial file at `path`.
pub fn write_atomic(
    path: &Path,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        body(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
