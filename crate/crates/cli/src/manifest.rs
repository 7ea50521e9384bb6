//! Run manifests: what was run, on which inputs, with which settings.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub config: Value,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub wall_clock_ms: u128,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn digest(path: &Path, bytes: &[u8]) -> InputDigest {
    InputDigest {
        path: path.display().to_string(),
        sha256: sha256_hex(bytes),
    }
}

impl RunManifest {
    pub fn new(command: Vec<String>, seed: Option<u64>, jobs: Option<usize>) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            inputs: Vec::new(),
            config: Value::Null,
            seed,
            jobs,
            wall_clock_ms: 0,
        }
    }
}
