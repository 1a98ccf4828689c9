//! Persistent single-file store of computed records, guarded by a checksum.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::record::{CellKey, ResultRecord};

const SCHEMA: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema: u32,
    checksum: String,
    entries: BTreeMap<String, ResultRecord>,
}

/// Hash of the library and front-end versions; records computed by other builds never match.
pub fn code_version() -> String {
    let digest = Sha256::digest(format!("hookext {} cli {} schema {SCHEMA}", hookext::VERSION, env!("CARGO_PKG_VERSION")));
    hex::encode(&digest[..8])
}

fn entry_key((a, b, k, i, family): CellKey) -> String {
    format!("{a},{b},{k},{i},{family},{}", code_version())
}

fn checksum(entries: &BTreeMap<String, ResultRecord>) -> String {
    let body = serde_json::to_string(entries).expect("records serialize");
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// Default location: `$XDG_CACHE_HOME/hookext/results.json`, else `~/.cache/hookext/results.json`.
pub fn default_path() -> PathBuf {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .unwrap_or_else(|| PathBuf::from("."));
    base.join("hookext").join("results.json")
}

#[derive(Debug, Default)]
pub struct ResultCache {
    path: Option<PathBuf>,
    entries: BTreeMap<String, ResultRecord>,
    dirty: bool,
}

impl ResultCache {
    /// A cache that never touches the disk.
    pub fn disabled() -> Self {
        Self::default()
    }

    /// Loads the cache file. A missing file gives an empty cache; an unreadable,
    /// malformed or tampered file is ignored with a warning on stderr.
    pub fn load(path: &Path) -> Self {
        let mut cache = ResultCache { path: Some(path.to_path_buf()), ..Self::default() };
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return cache,
            Err(e) => {
                eprintln!("warning: ignoring unreadable cache {}: {e}", path.display());
                return cache;
            }
        };
        match serde_json::from_str::<CacheFile>(&text) {
            Ok(file) if file.schema == SCHEMA && file.checksum == checksum(&file.entries) => cache.entries = file.entries,
            Ok(_) => eprintln!("warning: ignoring cache {} (checksum or schema mismatch)", path.display()),
            Err(e) => eprintln!("warning: ignoring corrupt cache {}: {e}", path.display()),
        }
        cache
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: CellKey) -> Option<&ResultRecord> {
        self.entries.get(&entry_key(key))
    }

    pub fn insert(&mut self, record: ResultRecord) {
        self.entries.insert(entry_key(record.key()), record);
        self.dirty = true;
    }

    /// Writes the file atomically (temporary file, then rename) if anything changed.
    pub fn save(&mut self) -> io::Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        if !self.dirty {
            return Ok(());
        }
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let file = CacheFile { schema: SCHEMA, checksum: checksum(&self.entries), entries: self.entries.clone() };
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string_pretty(&file)?)?;
        fs::rename(&tmp, path)?;
        self.dirty = false;
        Ok(())
    }
}

/// Deletes the cache file; returns whether one existed.
pub fn clear(path: &Path) -> io::Result<bool> {
    match fs::remove_file(path) {
        Ok(()) => Ok(true),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(false),
        Err(e) => Err(e),
    }
}
