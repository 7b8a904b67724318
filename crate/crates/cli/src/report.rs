//! Deterministic machine-readable reports. Results and checks are emitted
//! with stable key order; all timing goes to standard error so that two
//! runs with the same inputs, flags and seed produce byte-identical output.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

pub struct Report {
    command: &'static str,
    inputs: Vec<InputDigest>,
    results: BTreeMap<String, serde_json::Value>,
    checks: Vec<Check>,
    started: Instant,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            inputs: Vec::new(),
            results: BTreeMap::new(),
            checks: Vec::new(),
            started: Instant::now(),
        }
    }

    /// Read and digest an input file, then parse it as JSON.
    pub fn load_json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, String> {
        let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(hasher.finalize()),
        });
        serde_json::from_slice(&bytes).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Accept either a bare polynomial document or a threefold document
    /// with an `F` field.
    pub fn load_json_or_threefold<T: DeserializeOwned>(
        &mut self,
        path: &Path,
    ) -> Result<T, String> {
        let value: serde_json::Value = self.load_json(path)?;
        let candidate = match value.get("F") {
            Some(f) => f.clone(),
            None => value,
        };
        serde_json::from_value(candidate).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn result(&mut self, key: &str, value: serde_json::Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: &str) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.to_string(),
        });
    }

    /// Emit the report on stdout and derive the exit code: 0 when every
    /// check passed, 1 otherwise.
    pub fn finish(self) -> ExitCode {
        #[derive(Serialize)]
        struct Doc<'a> {
            command: &'a str,
            inputs: &'a [InputDigest],
            results: &'a BTreeMap<String, serde_json::Value>,
            checks: &'a [Check],
            ok: bool,
        }
        let ok = self.checks.iter().all(|c| c.pass);
        let doc = Doc {
            command: self.command,
            inputs: &self.inputs,
            results: &self.results,
            checks: &self.checks,
            ok,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("serializable")
        );
        eprintln!(
            "{} finished in {:.3}s",
            self.command,
            self.started.elapsed().as_secs_f64()
        );
        if ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}
