//! Diagram cache keyed by the configuration hash.

use std::path::{Path, PathBuf};

use crate::output::{to_json, HasseOutput};

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl AsRef<Path>) -> Cache {
        Cache {
            dir: dir.as_ref().to_path_buf(),
        }
    }

    /// `$XDG_CACHE_HOME/theta-closure`, falling back to `~/.cache`.
    pub fn default_dir() -> Option<PathBuf> {
        std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
            .map(|d| d.join("theta-closure"))
    }

    fn path(&self, hash: &str) -> PathBuf {
        self.dir.join(format!("hasse-{hash}.json"))
    }

    /// A cached diagram, ignoring unreadable or mismatched entries.
    pub fn get(&self, hash: &str) -> Option<HasseOutput> {
        let text = std::fs::read_to_string(self.path(hash)).ok()?;
        let out: HasseOutput = serde_json::from_str(&text).ok()?;
        (out.config_hash == hash).then_some(out)
    }

    pub fn put(&self, out: &HasseOutput) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".hasse-{}.tmp", out.config_hash));
        std::fs::write(&tmp, to_json(out))?;
        std::fs::rename(tmp, self.path(&out.config_hash))
    }
}
