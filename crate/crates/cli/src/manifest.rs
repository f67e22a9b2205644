//! Run manifests: what was run, with which parameters, and a digest of the output.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub inputs: Vec<String>,
    pub output: Option<String>,
    pub duration_ms: u128,
    /// `sha256:` of the emitted document. Excludes timing, so identical
    /// inputs give identical digests.
    pub digest: String,
}

pub fn digest(document: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(document)))
}

impl RunManifest {
    pub fn new(command: &str, parameters: BTreeMap<String, String>, inputs: Vec<String>) -> Self {
        Self {
            command: command.into(),
            parameters,
            inputs,
            output: None,
            duration_ms: 0,
            digest: String::new(),
        }
    }

    pub fn finish(&mut self, document: &[u8], output: Option<&Path>, elapsed: Duration) {
        self.digest = digest(document);
        self.output = output.map(|p| p.display().to_string());
        self.duration_ms = elapsed.as_millis();
    }
}
