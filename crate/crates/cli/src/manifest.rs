//! Run manifests: one flat key=value file per run recording the verb, the
//! fully resolved parameter set, the emitted artifacts and wall-clock
//! bounds. Re-running with the recorded parameters reproduces every
//! non-timing artifact byte-exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug)]
pub struct RunManifest {
    verb: String,
    params: Vec<(String, String)>,
    master_seed: u64,
    artifacts: Vec<PathBuf>,
    start_unix: f64,
}

fn now_unix() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

impl RunManifest {
    pub fn start(verb: &str, master_seed: u64) -> Self {
        Self {
            verb: verb.to_string(),
            params: Vec::new(),
            master_seed,
            artifacts: Vec::new(),
            start_unix: now_unix(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn artifact(&mut self, path: &Path) {
        self.artifacts.push(path.to_path_buf());
    }

    /// Write the manifest itself; its own path is not listed.
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut out = String::new();
        let _ = writeln!(out, "verb={}", self.verb);
        let _ = writeln!(out, "version={}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "seed={}", self.master_seed);
        for (k, v) in &self.params {
            let _ = writeln!(out, "{k}={v}");
        }
        for a in &self.artifacts {
            let _ = writeln!(out, "artifact={}", a.display());
        }
        let _ = writeln!(out, "start_unix={:.3}", self.start_unix);
        let _ = writeln!(out, "end_unix={:.3}", now_unix());
        std::fs::write(path, out)
    }
}
