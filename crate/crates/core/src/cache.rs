//! On-disk cache of derived rewrite systems and basis tables.
//!
//! One JSON-lines file per key: a header line carrying the schema version,
//! the key and a sha256 checksum of the payload line, then the payload.
//! Any mismatch (version, key, checksum, parse failure) is treated as a
//! miss; entries are rebuilt and rewritten, never trusted across versions.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(serde::Serialize, serde::Deserialize)]
struct Header {
    schema: u32,
    key: String,
    sha256: String,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl AsRef<Path>) -> Cache {
        Cache {
            dir: dir.as_ref().to_path_buf(),
        }
    }

    /// Resolve the cache directory from an explicit flag or the
    /// POLYZETA_CACHE_DIR environment variable.
    pub fn from_options(flag: Option<PathBuf>) -> Option<Cache> {
        flag.or_else(|| std::env::var_os("POLYZETA_CACHE_DIR").map(PathBuf::from))
            .map(Cache::new)
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.jsonl"))
    }

    pub fn load<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let content = fs::read_to_string(self.path_for(key)).ok()?;
        let mut lines = content.lines();
        let header: Header = serde_json::from_str(lines.next()?).ok()?;
        if header.schema != SCHEMA_VERSION || header.key != key {
            return None;
        }
        let payload = lines.next()?;
        if hex_sha256(payload) != header.sha256 {
            return None;
        }
        serde_json::from_str(payload).ok()
    }

    pub fn store<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let payload = serde_json::to_string(value).expect("serializable cache payload");
        let header = Header {
            schema: SCHEMA_VERSION,
            key: key.to_string(),
            sha256: hex_sha256(&payload),
        };
        let content = format!("{}\n{}\n", serde_json::to_string(&header).unwrap(), payload);
        fs::write(self.path_for(key), content)?;
        Ok(())
    }
}

fn hex_sha256(s: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(s.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::q;
    use crate::symbols::{CPoly, RewriteSystem, ZetaSymbol};
    use crate::words::{Alphabet, Word};

    fn sample_system() -> RewriteSystem {
        let y21 = ZetaSymbol::sigma(Word::y_from_indices_str("2,1").unwrap());
        let y3 = ZetaSymbol::sigma(Word::y_from_indices_str("3").unwrap());
        let y2 = ZetaSymbol::sigma(Word::y_from_indices_str("2").unwrap());
        RewriteSystem::new(
            Alphabet::Y,
            vec![(y21, CPoly::symbol(y3.clone()).scale(&q(3, 2)))],
            vec![y2, y3],
            3,
        )
        .unwrap()
    }

    #[test]
    fn roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let rs = sample_system();
        cache.store("relations-w3", &rs).unwrap();
        let loaded: RewriteSystem = cache.load("relations-w3").unwrap();
        assert_eq!(loaded, rs);
    }

    #[test]
    fn corruption_detected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let rs = sample_system();
        cache.store("relations-w3", &rs).unwrap();
        // flip one byte of the payload
        let path = dir.path().join("relations-w3.jsonl");
        let mut content = fs::read_to_string(&path).unwrap();
        content = content.replace("3/2", "5/2");
        fs::write(&path, content).unwrap();
        assert!(cache.load::<RewriteSystem>("relations-w3").is_none());
    }

    #[test]
    fn version_and_key_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        cache.store("a", &vec![1, 2, 3]).unwrap();
        assert!(cache.load::<Vec<i32>>("b").is_none());
        // forged header with a wrong schema version
        let path = dir.path().join("a.jsonl");
        let content = fs::read_to_string(&path).unwrap();
        let forged = content.replace("\"schema\":1", "\"schema\":999");
        fs::write(&path, forged).unwrap();
        assert!(cache.load::<Vec<i32>>("a").is_none());
    }
}
