//! Content-addressed report cache. Keys hash the ring spec, command,
//! canonicalized parameters and the tool/schema versions, so a version bump
//! invalidates everything. Values are exactly the report bytes; a sidecar
//! stores the job so entries can be recomputed and compared.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn key_for(job_canonical: &str) -> String {
        let mut h = Sha256::new();
        h.update(job_canonical.as_bytes());
        hex::encode(h.finalize())
    }

    fn value_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.report.json"))
    }

    fn job_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.job.json"))
    }

    /// Corrupt entries (unreadable or invalid JSON) are evicted, never served.
    pub fn get(&self, key: &str) -> Option<Vec<u8>> {
        let path = self.value_path(key);
        let bytes = fs::read(&path).ok()?;
        let ok = std::str::from_utf8(&bytes)
            .ok()
            .and_then(|s| serde_json::from_str::<serde_json::Value>(s).ok())
            .is_some();
        if !ok {
            let _ = fs::remove_file(&path);
            let _ = fs::remove_file(self.job_path(key));
            return None;
        }
        Some(bytes)
    }

    /// Atomic write: temp file in the same directory, then rename.
    pub fn put(&self, key: &str, report: &[u8], job_canonical: &str) -> std::io::Result<()> {
        for (path, bytes) in [
            (self.value_path(key), report.to_vec()),
            (self.job_path(key), job_canonical.as_bytes().to_vec()),
        ] {
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, &bytes)?;
            fs::rename(&tmp, &path)?;
        }
        Ok(())
    }

    pub fn keys(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Ok(rd) = fs::read_dir(&self.dir) {
            for entry in rd.flatten() {
                let name = entry.file_name().to_string_lossy().to_string();
                if let Some(k) = name.strip_suffix(".report.json") {
                    out.push(k.to_string());
                }
            }
        }
        out.sort();
        out
    }

    pub fn job_for(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.job_path(key)).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_eviction() {
        let dir = std::env::temp_dir().join(format!("ffrt-cache-test-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let cache = Cache::new(&dir).unwrap();
        let key = Cache::key_for("job-a");
        assert!(cache.get(&key).is_none());
        cache.put(&key, b"{\"ok\":true}\n", "job-a").unwrap();
        assert_eq!(cache.get(&key).unwrap(), b"{\"ok\":true}\n");
        // corrupt the entry: it must be evicted, not served
        fs::write(dir.join(format!("{key}.report.json")), b"not json").unwrap();
        assert!(cache.get(&key).is_none());
        assert!(cache.get(&key).is_none());
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn version_changes_move_keys() {
        let a = Cache::key_for("cmd|v1");
        let b = Cache::key_for("cmd|v2");
        assert_ne!(a, b);
    }
}
