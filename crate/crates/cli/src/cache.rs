//! Persistent result cache: an append-only JSON-lines file keyed by a SHA-256
//! of (datum, operation, arguments, engine version).

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

const FILE_NAME: &str = "cache.jsonl";

#[derive(Serialize, Deserialize)]
struct Line {
    key: String,
    engine_version: String,
    value: Value,
}

/// In-memory view of the cache file plus an append handle.
pub struct Cache {
    map: HashMap<String, Value>,
    file: Option<File>,
}

/// Canonical key of an operation.
pub fn key(datum: &Value, op: &str, args: &Value) -> String {
    let canon = serde_json::json!({
        "datum": datum,
        "op": op,
        "args": args,
        "engine_version": adlv::ENGINE_VERSION,
    });
    hex::encode(Sha256::digest(canon.to_string().as_bytes()))
}

impl Cache {
    /// A cache that never persists anything.
    pub fn disabled() -> Self {
        Cache { map: HashMap::new(), file: None }
    }

    /// Loads `dir/cache.jsonl`, skipping corrupt or stale lines, and compacts
    /// the file when any were found.
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
        let path = dir.join(FILE_NAME);
        let mut map = HashMap::new();
        let mut dropped = 0usize;
        if path.exists() {
            let f = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
            for (n, line) in BufReader::new(f).lines().enumerate() {
                let Ok(line) = line else {
                    dropped += 1;
                    continue;
                };
                match serde_json::from_str::<Line>(&line) {
                    Ok(l) if l.engine_version == adlv::ENGINE_VERSION => {
                        map.insert(l.key, l.value);
                    }
                    Ok(_) => dropped += 1,
                    Err(e) => {
                        log::warn!("{}:{}: skipping corrupt cache entry: {e}", path.display(), n + 1);
                        dropped += 1;
                    }
                }
            }
        }
        if dropped > 0 {
            compact(dir, &path, &map)?;
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        log::info!("cache {} holds {} entries", path.display(), map.len());
        Ok(Cache { map, file: Some(file) })
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.map.get(key)
    }

    /// Records a value; persisted entries are appended immediately.
    pub fn put(&mut self, key: String, value: Value) -> Result<()> {
        if let Some(f) = &mut self.file {
            let line = serde_json::to_string(&Line { key: key.clone(), engine_version: adlv::ENGINE_VERSION.into(), value: value.clone() })?;
            writeln!(f, "{line}")?;
            f.flush()?;
        }
        self.map.insert(key, value);
        Ok(())
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.map.len()
    }
}

/// Rewrites the cache file with only the valid entries, atomically.
fn compact(dir: &Path, path: &Path, map: &HashMap<String, Value>) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    let mut keys: Vec<&String> = map.keys().collect();
    keys.sort();
    for k in keys {
        let line = serde_json::to_string(&Line { key: k.clone(), engine_version: adlv::ENGINE_VERSION.into(), value: map[k].clone() })?;
        writeln!(tmp, "{line}")?;
    }
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error).with_context(|| format!("replacing {}", path.display()))?;
    Ok(())
}
