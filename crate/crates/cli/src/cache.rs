//! Append-only JSON-lines result cache keyed by a request digest.

use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const FILE: &str = "results.jsonl";

pub struct Cache {
    path: PathBuf,
}

/// `sha256` of the canonical request plus the library version.
pub fn digest(request: &Value) -> String {
    let canonical = json!({ "request": request, "version": env!("CARGO_PKG_VERSION") });
    let bytes = serde_json::to_vec(&canonical).expect("JSON values always serialize");
    hex::encode(Sha256::digest(&bytes))
}

impl Cache {
    pub fn open(dir: &Path) -> std::io::Result<Cache> {
        fs::create_dir_all(dir)?;
        Ok(Cache { path: dir.join(FILE) })
    }

    /// The stored document for `key`; unreadable lines are skipped with a
    /// warning on stderr.
    pub fn get(&self, key: &str) -> Option<Value> {
        let f = fs::File::open(&self.path).ok()?;
        let mut found = None;
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let Ok(line) = line else {
                eprintln!("warning: cache line {} unreadable, skipped", i + 1);
                continue;
            };
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<Value>(&line) {
                Ok(rec) if rec.get("digest").and_then(Value::as_str) == Some(key) => {
                    found = rec.get("document").cloned();
                }
                Ok(_) => {}
                Err(_) => eprintln!("warning: cache line {} is corrupt, skipped", i + 1),
            }
        }
        found
    }

    pub fn put(&self, key: &str, request: &Value, doc: &Value) -> std::io::Result<()> {
        let created = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let rec = json!({
            "digest": key,
            "request": request,
            "document": doc,
            "status": doc.get("status"),
            "created_unix": created,
        });
        let mut line = serde_json::to_string(&rec).expect("JSON values always serialize");
        line.push('\n');
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        // one write per record keeps concurrent appenders from interleaving
        f.write_all(line.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        let req = json!({ "command": "x", "params": {} });
        let key = digest(&req);
        assert_eq!(key, digest(&req));
        assert_ne!(key, digest(&json!({ "command": "y", "params": {} })));
        assert!(c.get(&key).is_none());
        fs::write(dir.path().join(FILE), "{not json\n").unwrap();
        let doc = json!({ "status": "ok", "result": { "v": "1" } });
        c.put(&key, &req, &doc).unwrap();
        assert_eq!(c.get(&key), Some(doc));
    }
}
