use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::exactfield::Subspace;

const FORMAT: u32 = 1;

/// What is kept on disk per input hash.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub format: u32,
    pub hom_dims: Vec<Vec<usize>>,
    pub ext_dims: Vec<Vec<usize>>,
    pub simple_defects: Vec<usize>,
    pub oracle: Option<OracleEntry>,
}

/// The outcome of an oracle sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleEntry {
    pub families: usize,
    pub unstable: usize,
    pub stable_not_closed: usize,
    pub closed: Vec<Vec<Vec<Subspace>>>,
}

/// Disk cache keyed by input hash; a disabled cache never reads or writes.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    /// `EXSTRUCT_CACHE_DIR`, else the user cache directory, else the system temp directory.
    pub fn from_env() -> Self {
        let dir = std::env::var_os("EXSTRUCT_CACHE_DIR")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("XDG_CACHE_HOME").map(|d| PathBuf::from(d).join("exstruct")))
            .or_else(|| std::env::var_os("HOME").map(|d| PathBuf::from(d).join(".cache").join("exstruct")))
            .unwrap_or_else(|| std::env::temp_dir().join("exstruct"));
        Cache { dir: Some(dir) }
    }

    pub fn at(dir: PathBuf) -> Self {
        Cache { dir: Some(dir) }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn get(&self, key: &str) -> Option<CacheEntry> {
        let text = std::fs::read_to_string(self.path(key)?).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.format == FORMAT).then_some(entry)
    }

    /// Best effort: a failed write only costs recomputation.
    pub fn put(&self, key: &str, mut entry: CacheEntry) {
        let Some(path) = self.path(key) else {
            return;
        };
        entry.format = FORMAT;
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        if let Ok(json) = serde_json::to_string(&entry) {
            let tmp = path.with_extension("tmp");
            if std::fs::write(&tmp, json).is_ok() {
                let _ = std::fs::rename(tmp, path);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_disabled() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path().to_path_buf());
        assert!(cache.get("k").is_none());
        let entry = CacheEntry {
            hom_dims: vec![vec![1]],
            ext_dims: vec![vec![0]],
            ..Default::default()
        };
        cache.put("k", entry.clone());
        let back = cache.get("k").unwrap();
        assert_eq!(back.hom_dims, entry.hom_dims);
        assert_eq!(back.format, FORMAT);
        let off = Cache::disabled();
        off.put("k", entry);
        assert!(off.get("k").is_none());
    }
}
