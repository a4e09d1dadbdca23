//! Run manifests: enough to replay a run and get byte-identical outputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    /// Flag name (without dashes) to value; an empty value is a bare flag.
    pub params: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    /// Seed of a randomized suite, if any.
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.into(),
            inputs: Vec::new(),
            params: BTreeMap::new(),
            outputs: Vec::new(),
            seed: None,
            tool_version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn input(mut self, path: &Path) -> Self {
        self.inputs.push(path.display().to_string());
        self
    }

    pub fn output(mut self, path: &Path) -> Self {
        self.outputs.push(path.display().to_string());
        self
    }

    /// Command line reproducing the run; the first output is passed as `-o`.
    pub fn to_argv(&self) -> Vec<String> {
        let mut argv = vec![self.command.clone()];
        argv.extend(self.inputs.iter().cloned());
        for (k, v) in &self.params {
            argv.push(format!("--{k}"));
            if !v.is_empty() {
                argv.push(v.clone());
            }
        }
        if let Some(o) = self.outputs.first() {
            argv.push("-o".into());
            argv.push(o.clone());
        }
        argv
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// `<output>.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}
