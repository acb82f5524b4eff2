//! Verdict cache: one JSON file holding per-group results keyed by
//! small-group id and reduction flags, guarded by the engine version and a
//! content checksum. Any mismatch silently falls back to recomputation.

use std::collections::BTreeMap;
use std::path::Path;

use ccalab::decide::ReductionFlags;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CachedRow {
    pub cca: bool,
    pub strongly_cca: bool,
    pub cca_sets_examined: usize,
    pub strong_sets_examined: usize,
    pub timing_ms: u64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct CacheFile {
    engine_version: String,
    checksum: String,
    entries: BTreeMap<String, CachedRow>,
}

#[derive(Debug, Default)]
pub struct Cache {
    entries: BTreeMap<String, CachedRow>,
}

pub fn key(gap: (usize, usize), flags: ReductionFlags) -> String {
    format!(
        "{},{}|pp={}|dedup={}",
        gap.0, gap.1, flags.prime_power_only, flags.aut_orbit_dedup
    )
}

fn fnv1a64(data: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in data {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

impl Cache {
    /// Loads the cache, treating a missing file, a different engine
    /// version, a parse failure, or a checksum mismatch as empty.
    pub fn load(path: &Path) -> Cache {
        let Ok(text) = std::fs::read_to_string(path) else {
            return Cache::default();
        };
        let Ok(file) = serde_json::from_str::<CacheFile>(&text) else {
            return Cache::default();
        };
        if file.engine_version != ccalab::ENGINE_VERSION {
            return Cache::default();
        }
        let body = serde_json::to_string(&file.entries).expect("entries serialize");
        if fnv1a64(body.as_bytes()) != file.checksum {
            return Cache::default();
        }
        Cache { entries: file.entries }
    }

    pub fn get(&self, key: &str) -> Option<&CachedRow> {
        self.entries.get(key)
    }

    pub fn insert(&mut self, key: String, row: CachedRow) {
        self.entries.insert(key, row);
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let body = serde_json::to_string(&self.entries).expect("entries serialize");
        let file = CacheFile {
            engine_version: ccalab::ENGINE_VERSION.to_string(),
            checksum: fnv1a64(body.as_bytes()),
            entries: self.entries.clone(),
        };
        std::fs::write(path, serde_json::to_string_pretty(&file).expect("cache serialize"))
    }
}
