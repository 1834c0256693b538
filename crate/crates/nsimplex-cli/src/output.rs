//! CSV output with a leading provenance comment block.
//!
//! Lines starting with `#` carry run metadata (including a timestamp); the
//! body below them is deterministic for a fixed config and seed, so
//! stripping comments yields byte-comparable files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};

pub struct CsvWriter {
    inner: BufWriter<File>,
}

impl CsvWriter {
    pub fn create(
        path: &Path,
        command: &str,
        provenance: &BTreeMap<String, String>,
    ) -> Result<Self> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
            }
        }
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut inner = BufWriter::new(file);
        writeln!(inner, "# command={command}")?;
        writeln!(inner, "# tool=nsimplex {}", env!("CARGO_PKG_VERSION"))?;
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(inner, "# generated_at={stamp}")?;
        for (k, v) in provenance {
            writeln!(inner, "# {k}={v}")?;
        }
        Ok(Self { inner })
    }

    pub fn header(&mut self, columns: &[&str]) -> Result<()> {
        writeln!(self.inner, "{}", columns.join(","))?;
        Ok(())
    }

    pub fn row(&mut self, cells: &[String]) -> Result<()> {
        writeln!(self.inner, "{}", cells.join(","))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

/// Shorthand for building a row of display-formatted cells.
#[macro_export]
macro_rules! csv_row {
    ($($cell:expr),+ $(,)?) => {
        &[$(format!("{}", $cell)),+]
    };
}
