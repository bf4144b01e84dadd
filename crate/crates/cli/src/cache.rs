//! On-disk cache of fixed-locus enumerations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::records::GraphRecord;

pub const CACHE_SCHEMA_VERSION: u32 = 1;

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    G0Trees,
    G1Effective,
    RefinedTrees,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::G0Trees => "g0-trees",
            GraphKind::G1Effective => "g1-effective",
            GraphKind::RefinedTrees => "refined-trees",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub kind: GraphKind,
    pub n: usize,
    pub d: u32,
    pub k: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    schema_version: u32,
    engine_version: String,
    key: CacheKey,
    content_hash: String,
    records: Vec<GraphRecord>,
}

fn content_hash(records: &[GraphRecord]) -> String {
    let mut h = Sha256::new();
    for r in records {
        h.update(r.encoding.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone)]
pub struct EnumerationCache {
    dir: PathBuf,
    schema_version: u32,
}

impl EnumerationCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self::with_schema(dir, CACHE_SCHEMA_VERSION)
    }

    pub fn with_schema(dir: impl Into<PathBuf>, schema_version: u32) -> Self {
        EnumerationCache { dir: dir.into(), schema_version }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        let id = format!("v{}|{}|{}|{}|{}", self.schema_version, key.kind.name(), key.n, key.d, key.k);
        let digest = hex::encode(Sha256::digest(id.as_bytes()));
        self.dir.join(format!("{}-{}.json", key.kind.name(), &digest[..16]))
    }

    /// `None` on a miss; unreadable or inconsistent files count as misses.
    pub fn load(&self, key: &CacheKey) -> Option<Vec<GraphRecord>> {
        let path = self.path(key);
        let text = fs::read_to_string(&path).ok()?;
        let file: CacheFile = match serde_json::from_str(&text) {
            Ok(f) => f,
            Err(e) => {
                log::warn!("ignoring corrupt cache file {}: {e}", path.display());
                return None;
            }
        };
        if file.schema_version != self.schema_version || file.key != *key {
            log::warn!("ignoring stale cache file {}", path.display());
            return None;
        }
        if file.content_hash != content_hash(&file.records) {
            log::warn!("ignoring cache file {} with a bad content hash", path.display());
            return None;
        }
        Some(file.records)
    }

    /// Writes to a temporary file and renames it into place.
    pub fn store(&self, key: &CacheKey, records: &[GraphRecord]) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir)?;
        let file = CacheFile {
            schema_version: self.schema_version,
            engine_version: gwloc::VERSION.to_string(),
            key: *key,
            content_hash: content_hash(records),
            records: records.to_vec(),
        };
        let path = self.path(key);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            path.file_name().and_then(|s| s.to_str()).unwrap_or("cache"),
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        {
            let mut out = fs::File::create(&tmp)?;
            out.write_all(serde_json::to_string(&file)?.as_bytes())?;
            out.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Loads `key`, or generates and stores it. The flag reports a hit.
    pub fn get_or_generate(
        &self,
        key: &CacheKey,
        generate: impl FnOnce() -> Result<Vec<GraphRecord>, CliError>,
    ) -> Result<(Vec<GraphRecord>, bool), CliError> {
        if let Some(records) = self.load(key) {
            return Ok((records, true));
        }
        let records = generate()?;
        self.store(key, &records)?;
        Ok((records, false))
    }
}
