//! Versioned envelope written around every pipeline stage output.

use std::collections::BTreeMap;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Identity of a stage run: its inputs' digests and its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub tool_version: String,
    pub stage: String,
    /// input name → sha256 of its bytes
    pub inputs: BTreeMap<String, String>,
    pub params: BTreeMap<String, String>,
}

impl Fingerprint {
    pub fn new(stage: &str) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            stage: stage.to_string(),
            inputs: BTreeMap::new(),
            params: BTreeMap::new(),
        }
    }

    pub fn input(mut self, name: &str, bytes: &[u8]) -> Self {
        self.inputs.insert(name.to_string(), sha256_hex(bytes));
        self
    }

    pub fn param(mut self, name: &str, value: impl ToString) -> Self {
        self.params.insert(name.to_string(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact<T> {
    #[serde(flatten)]
    pub fingerprint: Fingerprint,
    pub data: T,
}

impl<T: Serialize + DeserializeOwned> Artifact<T> {
    pub fn new(fingerprint: Fingerprint, data: T) -> Self {
        Self { fingerprint, data }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Reads only the fingerprint of an artifact, skipping its payload.
pub fn read_fingerprint(text: &str) -> Option<Fingerprint> {
    serde_json::from_str(text).ok()
}
