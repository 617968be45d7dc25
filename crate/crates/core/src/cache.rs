//! On-disk page cache keyed by a content hash of the computation inputs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::gf::FieldDescriptor;
use crate::groups::{GroupFamily, CATALOG_VERSION};
use crate::specseq::{PageRecord, Variant, Window};

pub const CACHE_ENV: &str = "PICSS_CACHE";

pub fn cache_key(group: GroupFamily, field: FieldDescriptor, variant: Variant, window: Window) -> String {
    let mut h = Sha256::new();
    h.update(format!("picss-cache/{CATALOG_VERSION}\n{group}\n{field}\n{variant}\n{window}\n"));
    hex::encode(h.finalize())
}

/// A directory of page records; one subdirectory per key, one file per page.
#[derive(Debug)]
pub struct PageCache {
    root: PathBuf,
    lock: Mutex<()>,
}

impl PageCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        PageCache {
            root: root.into(),
            lock: Mutex::new(()),
        }
    }

    /// `PICSS_CACHE` if set, else `dir`.
    pub fn from_env(dir: Option<PathBuf>) -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or(dir)
            .map(PageCache::new)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn page_path(&self, key: &str, r: u32) -> PathBuf {
        self.root.join(key).join(format!("E{r}.json"))
    }

    pub fn store(&self, key: &str, record: &PageRecord) -> Result<()> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let dir = self.root.join(key);
        fs::create_dir_all(&dir)?;
        let tmp = dir.join(format!(".E{}.{}.tmp", record.r, std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(record.to_json()?.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, self.page_path(key, record.r))?;
        Ok(())
    }

    pub fn load(&self, key: &str, r: u32) -> Result<Option<PageRecord>> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        match fs::read_to_string(self.page_path(key, r)) {
            Ok(s) => Ok(Some(PageRecord::from_json(&s)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Pages stored under `key`, ascending.
    pub fn pages(&self, key: &str) -> Vec<u32> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let Ok(dir) = fs::read_dir(self.root.join(key)) else {
            return Vec::new();
        };
        let mut out: Vec<u32> = dir
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let name = e.file_name().into_string().ok()?;
                name.strip_prefix('E')?.strip_suffix(".json")?.parse().ok()
            })
            .collect();
        out.sort_unstable();
        out
    }
}
