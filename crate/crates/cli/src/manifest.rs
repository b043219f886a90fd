use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;

/// Written next to every output; together with the echoed config it is
/// enough to rerun the command bit-exactly.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub config_path: Option<PathBuf>,
    pub config_hash: Option<String>,
    pub master_seed: Option<u64>,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn start(command: &str, config_path: Option<&Path>) -> (Self, DateTime<Utc>) {
        let now = Utc::now();
        (
            Self {
                tool: env!("CARGO_PKG_NAME"),
                tool_version: env!("CARGO_PKG_VERSION"),
                command: command.to_string(),
                config_path: config_path.map(Path::to_path_buf),
                config_hash: None,
                master_seed: None,
                started_at: stamp(now),
                finished_at: String::new(),
                outputs: Vec::new(),
            },
            now,
        )
    }

    pub fn finish(&mut self) {
        self.finished_at = stamp(Utc::now());
    }
}

pub fn stamp(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Millis, true)
}
