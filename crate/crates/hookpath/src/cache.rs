//! Optional on-disk persistence of Eulerian floor tables, one versioned JSON
//! file per `(p, k, floor)`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagram::DiagramParams;
use crate::error::{Error, Result};
use crate::eulerian::{eulerian_inductive, FloorPolynomials};
use crate::stats::DescentRules;

pub const CACHE_VERSION: u32 = 1;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "HOOKPATH_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Envelope {
    version: u32,
    p: u64,
    k: u32,
    floor: u32,
    table: FloorPolynomials,
}

#[derive(Clone, Debug)]
pub struct FloorCache {
    dir: PathBuf,
}

impl FloorCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FloorCache { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(|v| Self::new(PathBuf::from(v)))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn file(&self, p: u64, k: u32, floor: u32) -> PathBuf {
        self.dir.join(format!("eulerian-p{p}-k{k}-floor{floor}.json"))
    }

    /// A stale version or a mismatched key counts as a miss.
    pub fn load(&self, p: u64, k: u32, floor: u32) -> Result<Option<FloorPolynomials>> {
        let path = self.file(p, k, floor);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
        };
        let env: Envelope =
            serde_json::from_str(&text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        if env.version != CACHE_VERSION || env.p != p || env.k != k || env.floor != floor {
            return Ok(None);
        }
        Ok(Some(env.table))
    }

    pub fn store(&self, p: u64, table: &FloorPolynomials) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::Cache(format!("{}: {e}", self.dir.display())))?;
        let env = Envelope {
            version: CACHE_VERSION,
            p,
            k: table.class_k,
            floor: table.floor,
            table: table.clone(),
        };
        let path = self.file(p, table.class_k, table.floor);
        let tmp = path.with_extension("json.tmp");
        let text = serde_json::to_string(&env).map_err(|e| Error::Cache(e.to_string()))?;
        fs::write(&tmp, text).map_err(|e| Error::Cache(format!("{}: {e}", tmp.display())))?;
        fs::rename(&tmp, &path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
    }
}

/// Adjudicated Eulerian tables for class `k`, read from the cache when every
/// floor is present and written back otherwise.
pub fn eulerian_tables(
    params: &DiagramParams,
    k: u32,
    up_to_floor: u32,
    cache: Option<&FloorCache>,
) -> Result<Vec<FloorPolynomials>> {
    let p = params.p();
    if let Some(c) = cache {
        let mut hit = Vec::new();
        for floor in 2 * k + 2..=up_to_floor {
            match c.load(p, k, floor)? {
                Some(t) => hit.push(t),
                None => break,
            }
        }
        if hit.len() as u32 == (up_to_floor + 1).saturating_sub(2 * k + 2) {
            return Ok(hit);
        }
    }
    let tables = eulerian_inductive(params, k, up_to_floor, &DescentRules::ADJUDICATED)?;
    if let Some(c) = cache {
        for t in &tables {
            c.store(p, t)?;
        }
    }
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = FloorCache::new(dir.path());
        let params = DiagramParams::new(3, 8).unwrap();
        let fresh = eulerian_tables(&params, 1, 8, Some(&cache)).unwrap();
        assert!(cache.load(3, 1, 8).unwrap().is_some());
        let again = eulerian_tables(&params, 1, 8, Some(&cache)).unwrap();
        assert_eq!(fresh, again);
        assert!(cache.load(5, 1, 8).unwrap().is_none());
    }
}
