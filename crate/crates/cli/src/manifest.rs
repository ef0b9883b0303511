//! Run manifests. Every invocation writes one; feeding it back through
//! `--manifest` re-executes the run with the identical resolved parameters
//! (including `created_at`), so outputs reproduce byte-for-byte.

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use std::fs;
use std::path::Path;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub subcommand: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub created_at: String,
}

impl RunManifest {
    pub fn new<P: Serialize>(
        subcommand: &str,
        params: &P,
        seed: Option<u64>,
        created_at: String,
    ) -> serde_json::Result<Self> {
        Ok(Self {
            tool_version: TOOL_VERSION.to_string(),
            subcommand: subcommand.to_string(),
            params: serde_json::to_value(params)?,
            seed,
            created_at,
        })
    }

    pub fn to_json_pretty(&self) -> serde_json::Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn write(&self, path: &Path) -> Result<(), String> {
        let text = self.to_json_pretty().map_err(|e| e.to_string())?;
        fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read manifest {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("malformed manifest: {e}"))
    }

    /// Deserialize the stored params, checking the subcommand matches.
    pub fn params_for<P: DeserializeOwned>(&self, subcommand: &str) -> Result<P, String> {
        if self.subcommand != subcommand {
            return Err(format!(
                "manifest is for subcommand `{}`, not `{subcommand}`",
                self.subcommand
            ));
        }
        serde_json::from_value(self.params.clone())
            .map_err(|e| format!("manifest params do not match `{subcommand}`: {e}"))
    }
}

/// RFC 3339 timestamp with a compact variant usable in directory names.
pub fn timestamp_now() -> String {
    chrono::Utc::now()
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub fn compact_timestamp(created_at: &str) -> String {
    created_at.replace([':', '-'], "")
}
