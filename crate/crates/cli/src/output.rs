//! Serialization and atomic output.

use std::io::Write;
use std::path::Path;

use dll_core::Mp;
use serde::Serialize;

use crate::exit::Failure;

pub const SCHEMA_VERSION: u32 = 1;

/// High-precision values go out as decimal strings with a fixed digit count.
pub fn decimal(v: &Mp, digits: usize) -> String {
    v.to_decimal(digits)
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(doc).map_err(Failure::io)?;
    s.push('\n');
    Ok(s)
}

/// Minimal CSV writer: none of our fields contain separators, but quote defensively.
pub fn csv_line(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

/// Writes to `out` through a temporary file in the same directory and a rename, or to stdout.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    let Some(path) = out else {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes()).map_err(Failure::io)?;
        return stdout.flush().map_err(Failure::io);
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| Failure::io(anyhow::anyhow!("cannot create a file in {}: {e}", dir.display())))?;
    tmp.write_all(text.as_bytes()).map_err(Failure::io)?;
    tmp.as_file().sync_all().map_err(Failure::io)?;
    tmp.persist(path)
        .map_err(|e| Failure::io(anyhow::anyhow!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}
