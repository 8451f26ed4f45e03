//! Run manifests: every output artifact records the resolved configuration,
//! input digests and tool version that produced it, so equal manifests on
//! equal inputs mean byte-identical outputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex(&Sha256::digest(&bytes)))
}

pub fn sha256_str(s: &str) -> String {
    hex(&Sha256::digest(s.as_bytes()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Resolved hyperparameters, stringified; sorted keys keep the
    /// serialization canonical.
    pub parameters: BTreeMap<String, String>,
    /// Input label → sha256 digest.
    pub inputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool: "granulate".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            inputs: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn input_file(&mut self, label: &str, path: &Path) -> Result<&mut Self> {
        let digest = sha256_file(path)?;
        self.inputs.insert(label.to_string(), digest);
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    /// Digest of the canonical JSON form; embedded in output headers.
    pub fn hash(&self) -> String {
        sha256_str(&self.to_json())
    }

    /// Writes `<path>` as pretty JSON.
    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_manifests_hash_equal() {
        let mut a = RunManifest::new("granularity");
        a.param("window", 100).param("mode", "window");
        let mut b = RunManifest::new("granularity");
        b.param("mode", "window").param("window", 100);
        assert_eq!(a.hash(), b.hash());
        b.param("window", 500);
        assert_ne!(a.hash(), b.hash());
    }
}
