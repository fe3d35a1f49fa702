use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde_json::Value;
use sha2::{Digest, Sha256};

/// Content-addressed report store. Keys hash the command, its normalized
/// inputs and the caps in force.
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn key(material: &Value) -> String {
        let bytes = serde_json::to_vec(material).expect("JSON values serialize");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn get(&self, key: &str) -> Option<Value> {
        let path = self.dir.as_ref()?.join(format!("{key}.json"));
        let text = fs::read(path).ok()?;
        serde_json::from_slice(&text).ok()
    }

    /// Write to a temporary file in the cache directory, then rename into place.
    pub fn put(&self, key: &str, value: &Value) -> std::io::Result<()> {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&serde_json::to_vec(value).expect("JSON values serialize"))?;
            f.sync_all()?;
        }
        fs::rename(&tmp, dir.join(format!("{key}.json")))
    }
}
