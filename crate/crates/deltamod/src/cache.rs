//! Persistent JSON cache of computation results, keyed by
//! (delta, r, mode, algorithm version).

use crate::modsolve::Mode;
use crate::search::ComputationResult;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Bump on any semantic change to the search; stale entries simply stop
/// matching instead of being migrated.
pub const ALGORITHM_VERSION: &str = "2";

pub struct ResultCache {
    path: PathBuf,
    entries: BTreeMap<String, ComputationResult>,
}

impl ResultCache {
    /// Opens (or initializes, when the file is missing) a cache at `path`.
    pub fn open(path: &Path) -> Result<Self> {
        let entries = match std::fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text)
                .map_err(|e| Error::Io(format!("unreadable cache {}: {e}", path.display())))?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(e.into()),
        };
        Ok(ResultCache { path: path.to_path_buf(), entries })
    }

    fn key(delta: i64, r: usize, mode: Mode) -> String {
        let mode = match mode {
            Mode::Generic => "generic",
            Mode::NonGeneric => "nonGeneric",
        };
        format!("{delta}:{r}:{mode}:v{ALGORITHM_VERSION}")
    }

    pub fn get(&self, delta: i64, r: usize, mode: Mode) -> Option<&ComputationResult> {
        self.entries.get(&Self::key(delta, r, mode))
    }

    pub fn put(&mut self, result: ComputationResult) {
        self.entries.insert(Self::key(result.delta, result.r, result.mode), result);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes the whole cache atomically (temp file + rename).
    pub fn save(&self) -> Result<()> {
        let tmp = self.path.with_extension("cache.tmp");
        let text =
            serde_json::to_string_pretty(&self.entries).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, &self.path)?;
        Ok(())
    }
}
