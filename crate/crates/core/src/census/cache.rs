//! One JSON file per `(kind, n, r)` holding the record and a hash of the
//! code that produced it. A file whose hash differs from the running code is
//! ignored and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CensusError, CensusKind, CensusRecord};

/// Sources whose behaviour determines census records.
const SOURCES: &[&str] = &[
    include_str!("mod.rs"),
    include_str!("enumerate.rs"),
    include_str!("../johnson/graph.rs"),
    include_str!("../johnson/mod.rs"),
    include_str!("../matroid/mod.rs"),
    include_str!("../matroid/aut.rs"),
    include_str!("../subset.rs"),
    include_str!("../permgroup.rs"),
];

/// Hex SHA-256 over the crate version and the census-relevant sources.
pub fn code_version_hash() -> String {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    for src in SOURCES {
        h.update((src.len() as u64).to_le_bytes());
        h.update(src.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize, Deserialize)]
struct Entry {
    code_hash: String,
    record: CensusRecord,
}

#[derive(Debug, Clone)]
pub struct CensusCache {
    dir: PathBuf,
    hash: String,
}

impl CensusCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self, CensusError> {
        Self::with_hash(dir, code_version_hash())
    }

    /// A cache that treats `hash` as the running code's version.
    pub fn with_hash(dir: impl AsRef<Path>, hash: String) -> Result<Self, CensusError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)
            .map_err(|e| CensusError::Cache(format!("{}: {e}", dir.display())))?;
        Ok(Self { dir, hash })
    }

    pub fn path(&self, kind: CensusKind, n: usize, r: usize) -> PathBuf {
        self.dir.join(format!("{kind}_n{n}_r{r}.json"))
    }

    /// The cached record, if present, readable and current.
    pub fn load(&self, kind: CensusKind, n: usize, r: usize) -> Option<CensusRecord> {
        let text = fs::read_to_string(self.path(kind, n, r)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        let rec = entry.record;
        (entry.code_hash == self.hash && (rec.kind, rec.n, rec.r) == (kind, n, r)).then_some(rec)
    }

    /// Writes through a temporary file so a crash never leaves a torn entry.
    pub fn store(&self, record: &CensusRecord) -> Result<(), CensusError> {
        let path = self.path(record.kind, record.n, record.r);
        let tmp = path.with_extension("json.tmp");
        let entry = Entry {
            code_hash: self.hash.clone(),
            record: *record,
        };
        let text = serde_json::to_string_pretty(&entry).expect("plain data serializes");
        fs::write(&tmp, text)
            .and_then(|_| fs::rename(&tmp, &path))
            .map_err(|e| CensusError::Cache(format!("{}: {e}", path.display())))
    }
}
