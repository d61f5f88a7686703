//! Persistent store for computed polynomials.
//!
//! Entries live in JSON-lines files, one file per weight cap, one line per
//! polynomial: `{"key": "4,2@12", "weight_cap": 12, "terms": [...]}`.
//! `index.json` maps each key to the SHA-256 of its line; a line whose hash
//! does not match (or that does not parse) is discarded on load, so the
//! caller recomputes it.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::polyring::Poly;
use crate::scalars::Coeff;

const INDEX: &str = "index.json";

fn digest(line: &str) -> String {
    hex::encode(Sha256::digest(line.as_bytes()))
}

fn file_for_cap(cap: u32) -> String {
    format!("qmac-cap{cap}.jsonl")
}

/// Directory-backed key/value store for polynomials.
#[derive(Debug)]
pub struct CacheStore {
    dir: PathBuf,
    /// key → (file name, serialized line)
    entries: BTreeMap<String, (String, String)>,
    dirty: bool,
    discarded: usize,
}

impl CacheStore {
    /// Opens (creating if needed) a cache directory and loads every valid entry.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let index: BTreeMap<String, String> = match fs::read_to_string(dir.join(INDEX)) {
            Ok(text) => serde_json::from_str(&text).unwrap_or_default(),
            Err(_) => BTreeMap::new(),
        };
        let mut store = CacheStore { dir, entries: BTreeMap::new(), dirty: false, discarded: 0 };
        let mut files: Vec<PathBuf> = fs::read_dir(&store.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect();
        files.sort();
        for path in files {
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
            let text = fs::read_to_string(&path)?;
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                let key = serde_json::from_str::<Value>(line)
                    .ok()
                    .and_then(|v| v.get("key").and_then(Value::as_str).map(str::to_string));
                match key {
                    Some(k) if index.get(&k).is_some_and(|h| *h == digest(line)) => {
                        store.entries.insert(k, (name.clone(), line.to_string()));
                    }
                    _ => {
                        store.discarded += 1;
                        store.dirty = true;
                    }
                }
            }
        }
        // index entries without a matching line are stale as well
        if index.len() != store.entries.len() {
            store.dirty = true;
        }
        Ok(store)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of corrupt or unindexed lines dropped while loading.
    pub fn discarded(&self) -> usize {
        self.discarded
    }

    /// The canonical key `"λ@cap"`.
    pub fn key(partition: &impl std::fmt::Display, cap: u32) -> String {
        format!("{partition}@{cap}")
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get<C: Coeff>(&self, key: &str) -> Result<Option<Poly<C>>> {
        let Some((_, line)) = self.entries.get(key) else {
            return Ok(None);
        };
        let v: Value = serde_json::from_str(line)?;
        Poly::from_json(&v).map(Some).map_err(|e| Error::Cache(format!("{key}: {e}")))
    }

    pub fn put<C: Coeff>(&mut self, key: &str, p: &Poly<C>) {
        let mut v = p.to_json();
        let obj = v.as_object_mut().expect("polynomial JSON is an object");
        let mut ordered = serde_json::Map::new();
        ordered.insert("key".into(), json!(key));
        ordered.append(obj);
        let line = Value::Object(ordered).to_string();
        self.entries.insert(key.to_string(), (file_for_cap(p.weight_cap()), line));
        self.dirty = true;
    }

    /// Rewrites the data files and the index if anything changed.
    pub fn flush(&mut self) -> Result<()> {
        if !self.dirty {
            return Ok(());
        }
        let mut by_file: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        let mut index = BTreeMap::new();
        for (key, (file, line)) in &self.entries {
            by_file.entry(file.as_str()).or_default().push(line.as_str());
            index.insert(key.clone(), digest(line));
        }
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            if path.extension().is_some_and(|x| x == "jsonl") && !by_file.contains_key(name) {
                fs::remove_file(&path)?;
            }
        }
        for (file, lines) in by_file {
            write_atomic(&self.dir.join(file), &(lines.join("\n") + "\n"))?;
        }
        write_atomic(&self.dir.join(INDEX), &serde_json::to_string_pretty(&index)?)?;
        self.dirty = false;
        Ok(())
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(contents.as_bytes())?;
    f.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Monomial;
    use crate::scalars::{rat, Rational};

    fn sample() -> Poly<Rational> {
        Poly::from_terms([(Monomial::var_pow(1, 3), rat(4, 3)), (Monomial::var(3), rat(-4, 1))], 12)
    }

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = CacheStore::open(dir.path()).unwrap();
        c.put("2,1@12", &sample());
        c.flush().unwrap();
        let c2 = CacheStore::open(dir.path()).unwrap();
        assert_eq!(c2.get::<Rational>("2,1@12").unwrap(), Some(sample()));
        assert_eq!(c2.discarded(), 0);
        assert!(dir.path().join("qmac-cap12.jsonl").exists());
    }

    #[test]
    fn corrupt_line_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = CacheStore::open(dir.path()).unwrap();
        c.put("2,1@12", &sample());
        c.put("1@12", &Poly::<Rational>::t(1, 12));
        c.flush().unwrap();
        let path = dir.path().join("qmac-cap12.jsonl");
        let text = fs::read_to_string(&path).unwrap().replace("\"-4\"", "\"-5\"");
        fs::write(&path, text).unwrap();
        let mut c2 = CacheStore::open(dir.path()).unwrap();
        assert_eq!(c2.discarded(), 1);
        assert!(!c2.contains("2,1@12"));
        assert!(c2.contains("1@12"));
        c2.flush().unwrap();
        let c3 = CacheStore::open(dir.path()).unwrap();
        assert_eq!(c3.discarded(), 0);
        assert_eq!(c3.len(), 1);
    }
}
