//! Append-only JSON-lines result cache with an advisory lock file.
//!
//! One line per entry: the content key, the cached record (an extremal
//! record or a check report), a timestamp, and the tool version. The
//! cache never changes what a command returns: hits are byte-identical
//! to the record produced when the entry was written, and exact-mode
//! records are reproducible, so a cleared cache regenerates the same
//! values (wall-clock fields aside).

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use zarex_core::record::{CheckReport, ExtremalRecord};

pub const CACHE_FILE: &str = "cache.jsonl";

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(tag = "kind", content = "record")]
pub enum CachedRecord {
    #[serde(rename = "extremal")]
    Extremal(ExtremalRecord),
    #[serde(rename = "check")]
    Check(CheckReport),
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CacheEntry {
    pub key: String,
    #[serde(flatten)]
    pub record: CachedRecord,
    pub created_at: String,
    pub tool_version: String,
}

pub struct Cache {
    dir: PathBuf,
    enabled: bool,
}

impl Cache {
    /// Resolution order: explicit flag, then ZAREX_CACHE_DIR, then
    /// `.zarex` under the working directory.
    pub fn resolve(flag: Option<PathBuf>, enabled: bool) -> Cache {
        let dir = flag
            .or_else(|| std::env::var_os("ZAREX_CACHE_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(".zarex"));
        Cache { dir, enabled }
    }

    pub fn file(&self) -> PathBuf {
        self.dir.join(CACHE_FILE)
    }

    fn lock_path(&self) -> PathBuf {
        self.dir.join("cache.jsonl.lock")
    }

    /// Advisory lock: a sibling lock file taken with create-new and
    /// bounded retries; concurrent CLI invocations serialize on it.
    fn with_lock<T>(&self, f: impl FnOnce() -> std::io::Result<T>) -> std::io::Result<T> {
        fs::create_dir_all(&self.dir)?;
        let lock = self.lock_path();
        let mut acquired = false;
        for _ in 0..200 {
            match fs::OpenOptions::new().write(true).create_new(true).open(&lock) {
                Ok(mut file) => {
                    let _ = write!(file, "{}", std::process::id());
                    acquired = true;
                    break;
                }
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    thread::sleep(Duration::from_millis(10));
                }
                Err(e) => return Err(e),
            }
        }
        let out = f();
        if acquired {
            let _ = fs::remove_file(&lock);
        }
        out
    }

    pub fn lookup(&self, key: &str) -> Option<CachedRecord> {
        if !self.enabled {
            return None;
        }
        let text = fs::read_to_string(self.file()).ok()?;
        let mut found = None;
        for line in text.lines() {
            if let Ok(entry) = serde_json::from_str::<CacheEntry>(line) {
                if entry.key == key {
                    found = Some(entry.record);
                }
            }
        }
        found
    }

    pub fn append(&self, key: &str, record: CachedRecord) -> std::io::Result<()> {
        if !self.enabled {
            return Ok(());
        }
        let entry = CacheEntry {
            key: key.to_string(),
            record,
            created_at: chrono::Utc::now().to_rfc3339(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        };
        let line = serde_json::to_string(&entry).expect("cache entries serialize");
        self.with_lock(|| {
            let mut file = fs::OpenOptions::new().create(true).append(true).open(self.file())?;
            writeln!(file, "{line}")
        })
    }

    pub fn entries(&self) -> Vec<CacheEntry> {
        let Ok(text) = fs::read_to_string(self.file()) else {
            return Vec::new();
        };
        text.lines().filter_map(|l| serde_json::from_str(l).ok()).collect()
    }

    pub fn clear(&self) -> std::io::Result<()> {
        match fs::remove_file(self.file()) {
            Ok(()) => Ok(()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
            Err(e) => Err(e),
        }
    }
}

/// Content key of an operation: hash of its canonical parameter JSON.
pub fn cache_key(op_json: &serde_json::Value) -> String {
    zarex_core::schema::content_hash(&op_json.to_string())
}

/// Flatten cache entries into CSV rows for `report --format csv`.
pub fn to_csv(entries: &[CacheEntry]) -> String {
    let mut out = String::from(
        "key,kind,created_at,tool_version,id,n,d,value,bound,measure,seed,elapsed_ms,lhs,relation,rhs,pass\n",
    );
    let esc = |s: &str| {
        if s.contains(',') || s.contains('"') {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    };
    for e in entries {
        match &e.record {
            CachedRecord::Extremal(r) => {
                let bound = serde_json::to_value(r.bound)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default();
                out.push_str(&format!(
                    "{},extremal,{},{},{},{},{},{},{},{},{},{},,,,\n",
                    esc(&e.key),
                    esc(&e.created_at),
                    esc(&e.tool_version),
                    esc(&r.pattern_id),
                    r.n,
                    r.d,
                    r.value,
                    bound,
                    r.measure.map(|m| m.to_string()).unwrap_or_default(),
                    r.seed.map(|s| s.to_string()).unwrap_or_default(),
                    r.elapsed_ms,
                ));
            }
            CachedRecord::Check(c) => {
                let rel = serde_json::to_value(c.relation)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default();
                out.push_str(&format!(
                    "{},check,{},{},{},,,,,,,,{},{},{},{}\n",
                    esc(&e.key),
                    esc(&e.created_at),
                    esc(&e.tool_version),
                    esc(&c.check_id),
                    c.lhs,
                    esc(&rel),
                    c.rhs,
                    c.pass,
                ));
            }
        }
    }
    out
}
