//! Buffered outputs committed only after every computation has succeeded.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Where a rendered file goes. `None` means standard output.
pub struct Pending {
    target: Option<PathBuf>,
    bytes: Vec<u8>,
}

#[derive(Default)]
pub struct Outputs {
    pending: Vec<Pending>,
}

impl Outputs {
    pub fn file(&mut self, path: impl Into<PathBuf>, bytes: Vec<u8>) {
        self.pending.push(Pending {
            target: Some(path.into()),
            bytes,
        });
    }

    pub fn file_or_stdout(&mut self, path: Option<PathBuf>, bytes: Vec<u8>) {
        self.pending.push(Pending { target: path, bytes });
    }

    /// Writes each file through a sibling temp file and a rename.
    pub fn commit(self) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        for p in self.pending {
            match p.target {
                Some(path) => {
                    write_atomic(&path, &p.bytes)?;
                    written.push(path);
                }
                None => {
                    let mut out = std::io::stdout().lock();
                    out.write_all(&p.bytes).context("writing to standard output")?;
                    out.flush().context("writing to standard output")?;
                }
            }
        }
        Ok(written)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(bytes).with_context(|| format!("writing {}", path.display()))?;
    tmp.persist(path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}
