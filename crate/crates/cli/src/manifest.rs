use serde::Serialize;
use sha2::{Digest, Sha256};
use zetazero::zeros::{ContourConfig, Rectangle};
use zetazero::EvalConfig;

pub const ARTIFACT_VERSION: &str = concat!("zetazero/", env!("CARGO_PKG_VERSION"));

/// Everything that determines a result. Thread count is deliberately absent.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<String>,
    pub eval: EvalConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contour: Option<ContourConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rect: Option<Rectangle>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub version: &'static str,
}

impl RunManifest {
    pub fn new(command: &str, eval: EvalConfig) -> Self {
        Self {
            command: command.to_string(),
            expr: None,
            config: None,
            eval,
            contour: None,
            rect: None,
            sigma0: None,
            t_values: None,
            output: None,
            version: ARTIFACT_VERSION,
        }
    }

    /// Hex SHA-256 of the manifest's canonical JSON.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("manifest serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("manifest serializes");
        v["hash"] = serde_json::Value::String(self.hash());
        v
    }
}
